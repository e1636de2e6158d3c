#ifndef BEMLAB_SCENARIO_HPP_
#define BEMLAB_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bemlab/geometry.hpp"
#include "bemlab/parallel.hpp"

namespace bem::scenario {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError {
  int line = 0;  // 1-based; 0 when the error is not tied to a line
  std::string message;
};

enum class CheckKind {
  tcd,
  integrate,
  lemma_bound,
  theorem,
  mcflow,
  rigidity,
  example_1_5,
  example_1_8,
};

std::string check_name(CheckKind kind);

enum class FiberKind { flat, sphere, bound };

struct ModelSpec {
  enum class Kind { warped, twisted } kind = Kind::warped;
  int dimension = 4;
  std::string warp = "1";
  FiberKind fiber_kind = FiberKind::flat;
  double fiber_value = 0.0;
  std::string weight = "0";
  double t_min = -10.0, t_max = 10.0;
  double y_min = -10.0, y_max = 10.0;
  double fd_step = 1e-3;

  bool operator==(const ModelSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  CheckKind check = CheckKind::tcd;
  std::string out;  // output directory; empty = current directory
  std::optional<ModelSpec> model;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> expect;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty() && config.has_value(); }
};

// Line-oriented key = value format with [model], [parameters] and
// [expect] sections. Unknown keys and sections are errors; every error
// carries its line number.
ParseResult parse_scenario(const std::string& text);

// Canonical text form; parse(serialize(c)) == c on valid configs.
std::string serialize(const ScenarioConfig& config);

// FNV-1a over the canonical serialization, as fixed-width hex.
std::string config_hash(const ScenarioConfig& config);

// Materializes the model description into an evaluable spacetime.
geometry::SpacetimeModel build_model(const ModelSpec& spec);

struct RunOptions {
  std::string out_override;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;  // recorded in the report; reserved for randomized checks
  Exec exec = Exec::parallel;
};

struct RunReport {
  std::string name;
  std::string check;
  nlohmann::json verdicts;
  std::vector<std::string> artifacts;  // file names relative to the output directory
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
  bool all_expected = true;
  std::vector<std::string> failures;
  double wall_ms = 0.0;  // excluded from the deterministic report file
};

// Executes the scenario, writes its artifacts (CSV trajectories, JSON
// reports) and returns the report. Numeric failures become failed
// verdicts, not exceptions.
RunReport run(const ScenarioConfig& config, const RunOptions& opts = {});

// Deterministic report body (everything except wall-clock).
nlohmann::json report_json(const RunReport& report);

// Built-in scenario texts shipped with the tool, keyed by name.
const std::vector<std::pair<std::string, std::string>>& builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);

// Machine-readable description of the config format.
nlohmann::json config_schema();

}  // namespace bem::scenario

#endif  // BEMLAB_SCENARIO_HPP_
