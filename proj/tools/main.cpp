#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <semaphore>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bemlab/scenario.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

int load_or_builtin(const std::string& arg, std::vector<bem::scenario::ScenarioConfig>& configs) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) {
    std::ifstream in(arg, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto parsed = bem::scenario::parse_scenario(ss.str());
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors) {
        std::cerr << arg << ":" << e.line << ": " << e.message << "\n";
      }
      return 2;
    }
    configs.push_back(*parsed.config);
    return 0;
  }
  if (auto builtin = bem::scenario::find_builtin(arg)) {
    configs.push_back(*builtin);
    return 0;
  }
  std::cerr << arg << ": no such file or built-in scenario\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bemlab: numerical laboratory for weighted Lorentzian comparison geometry"};
  app.require_subcommand(1);

  std::string out_dir;
  double tolerance = 1e-9;
  int jobs = 0;
  std::uint64_t seed = 0;
  app.add_option("--out", out_dir, "output directory for run artifacts");
  app.add_option("--tolerance", tolerance, "margin tolerance for sampled checks");
  app.add_option("--jobs", jobs, "max scenarios run concurrently (0 = all in sequence)");
  app.add_option("--seed", seed, "seed recorded in reports, reserved for randomized checks");

  std::vector<std::string> check_files;
  auto* check_cmd = app.add_subcommand("check", "validate scenario files without running them");
  check_cmd->add_option("files", check_files, "scenario files")->required();

  std::vector<std::string> run_args;
  auto* run_cmd = app.add_subcommand("run", "run scenario files or built-in scenarios");
  run_cmd->add_option("scenarios", run_args, "scenario files or built-in names")->required();

  auto* examples_cmd = app.add_subcommand("examples", "list built-in scenarios");
  auto* schema_cmd = app.add_subcommand("export-schema", "print the scenario format as JSON");

  CLI11_PARSE(app, argc, argv);

  if (examples_cmd->parsed()) {
    for (const auto& [name, text] : bem::scenario::builtin_scenarios()) {
      std::string summary;
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
          summary = line.substr(2);
          break;
        }
      }
      std::cout << name << "\t" << summary << "\n";
    }
    return 0;
  }

  if (schema_cmd->parsed()) {
    std::cout << bem::scenario::config_schema().dump(2) << "\n";
    return 0;
  }

  if (check_cmd->parsed()) {
    int status = 0;
    for (const auto& file : check_files) {
      std::vector<bem::scenario::ScenarioConfig> configs;
      const int rc = load_or_builtin(file, configs);
      if (rc != 0) {
        status = rc;
      } else {
        std::cout << file << ": ok (" << configs.back().name << ")\n";
      }
    }
    return status;
  }

  // run
  std::vector<bem::scenario::ScenarioConfig> configs;
  for (const auto& arg : run_args) {
    const int rc = load_or_builtin(arg, configs);
    if (rc != 0) return rc;
  }

  bem::scenario::RunOptions opts;
  opts.out_override = out_dir;
  opts.tolerance = tolerance;
  opts.seed = seed;

  std::vector<bem::scenario::RunReport> reports(configs.size());
  if (jobs > 1 && configs.size() > 1) {
    std::counting_semaphore<256> slots(std::min(jobs, 256));
    std::vector<std::future<void>> futures;
    futures.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
      futures.push_back(std::async(std::launch::async, [&, i] {
        slots.acquire();
        reports[i] = bem::scenario::run(configs[i], opts);
        slots.release();
      }));
    }
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      reports[i] = bem::scenario::run(configs[i], opts);
    }
  }

  bool any_failed = false;
  for (const auto& rep : reports) {
    if (rep.all_expected) {
      std::cout << "[ OK ] " << rep.name << " (" << rep.check << ", " << rep.wall_ms << " ms)\n";
    } else {
      any_failed = true;
      std::cout << "[FAIL] " << rep.name << " (" << rep.check << ")\n";
      for (const auto& f : rep.failures) std::cout << "       " << f << "\n";
    }
  }
  return any_failed ? 1 : 0;
}
