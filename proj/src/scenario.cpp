#include "bemlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bemlab/congruence.hpp"
#include "bemlab/expression.hpp"
#include "bemlab/focusing.hpp"
#include "bemlab/mcflow.hpp"

namespace bem::scenario {

namespace fs = std::filesystem;

std::string check_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::tcd:
      return "tcd";
    case CheckKind::integrate:
      return "integrate";
    case CheckKind::lemma_bound:
      return "lemma-bound";
    case CheckKind::theorem:
      return "theorem";
    case CheckKind::mcflow:
      return "mcflow";
    case CheckKind::rigidity:
      return "rigidity";
    case CheckKind::example_1_5:
      return "example-1-5";
    case CheckKind::example_1_8:
      return "example-1-8";
  }
  return "?";
}

namespace {

std::optional<CheckKind> check_from_name(const std::string& s) {
  for (CheckKind k : {CheckKind::tcd, CheckKind::integrate, CheckKind::lemma_bound,
                      CheckKind::theorem, CheckKind::mcflow, CheckKind::rigidity,
                      CheckKind::example_1_5, CheckKind::example_1_8}) {
    if (check_name(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) return std::nullopt;
  return v;
}

std::optional<long> parse_int(const std::string& s) {
  long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

std::optional<SyntheticDimension> parse_N(const std::string& s) {
  if (s == "inf") return SyntheticDimension::infinite();
  if (auto v = parse_double(s)) return SyntheticDimension::finite(*v);
  return std::nullopt;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parameter registry: one row per accepted key of each check.
struct ParamInfo {
  CheckKind check;
  const char* key;
  const char* type;  // real | int | bool | N | expr-t | expr-ty | expr-y | enum:...
  bool required;
  const char* fallback;  // textual default, "" for none
  const char* help;
};

const ParamInfo kParams[] = {
    {CheckKind::tcd, "N", "N", false, "inf", "synthetic dimension (number or inf)"},
    {CheckKind::tcd, "lambda", "expr-ty", false, "0", "lower bound lambda(t, y)"},
    {CheckKind::tcd, "t_from", "real", false, "", "scan box start (default: model domain)"},
    {CheckKind::tcd, "t_to", "real", false, "", "scan box end"},
    {CheckKind::tcd, "y_from", "real", false, "", "fiber scan start"},
    {CheckKind::tcd, "y_to", "real", false, "", "fiber scan end"},
    {CheckKind::tcd, "t_samples", "int", false, "21", "grid points in t"},
    {CheckKind::tcd, "y_samples", "int", false, "1", "grid points in y"},
    {CheckKind::tcd, "chi_samples", "int", false, "33", "rapidity samples"},
    {CheckKind::tcd, "chi_max", "real", false, "5", "rapidity cap"},
    {CheckKind::tcd, "tolerance", "real", false, "1e-9", "margin tolerance"},

    {CheckKind::integrate, "x0", "real", true, "", "initial normalized weighted mean curvature"},
    {CheckKind::integrate, "t_max", "real", true, "", "integration horizon"},
    {CheckKind::integrate, "N", "N", false, "inf", "synthetic dimension"},
    {CheckKind::integrate, "ric", "expr-t", false, "model",
     "curvature along the geodesic: 'model' or an expression in t"},
    {CheckKind::integrate, "shear", "expr-t", false, "0", "|sigma|^2(t)"},
    {CheckKind::integrate, "y0", "real", false, "0", "fiber base point of the geodesic"},
    {CheckKind::integrate, "rel_tol", "real", false, "1e-10", "per-step relative tolerance"},

    {CheckKind::lemma_bound, "regime", "enum:nonneg,desitter-conformal,desitter-constant,desitter-N",
     true, "", "which focusing bound to evaluate"},
    {CheckKind::lemma_bound, "delta", "real", true, "", "initial-condition margin"},
    {CheckKind::lemma_bound, "N", "N", false, "inf", "synthetic dimension"},
    {CheckKind::lemma_bound, "k", "real", false, "", "uniform upper bound of f"},
    {CheckKind::lemma_bound, "grad_f_future_causal", "bool", false, "false",
     "assume a future-causal weight gradient"},
    {CheckKind::lemma_bound, "verify", "bool", false, "true",
     "integrate the worst-case comparison congruence"},
    {CheckKind::lemma_bound, "y0", "real", false, "0", "fiber base point"},

    {CheckKind::theorem, "theorem", "enum:T1_4,T1_6a,T1_6b,T1_7", true, "",
     "singularity-criterion preset"},
    {CheckKind::theorem, "N", "N", false, "inf", "synthetic dimension"},
    {CheckKind::theorem, "surface_t", "real", false, "0", "initial slice"},
    {CheckKind::theorem, "t_from", "real", false, "", "TCD scan box start"},
    {CheckKind::theorem, "t_to", "real", false, "", "TCD scan box end"},
    {CheckKind::theorem, "y_from", "real", false, "", "fiber range start"},
    {CheckKind::theorem, "y_to", "real", false, "", "fiber range end"},
    {CheckKind::theorem, "t_samples", "int", false, "21", "TCD grid points in t"},
    {CheckKind::theorem, "y_samples", "int", false, "5", "sampled base points"},
    {CheckKind::theorem, "chi_samples", "int", false, "33", "rapidity samples"},
    {CheckKind::theorem, "chi_max", "real", false, "5", "rapidity cap"},
    {CheckKind::theorem, "k", "real", false, "", "upper bound of f (bounded route)"},
    {CheckKind::theorem, "grad_f_future_causal", "bool", false, "false",
     "assume a future-causal weight gradient"},
    {CheckKind::theorem, "horizon", "real", false, "50", "proper-time search horizon"},
    {CheckKind::theorem, "decay_from", "real", false, "",
     "tail certificate: f' positive and nondecreasing from this time"},
    {CheckKind::theorem, "tolerance", "real", false, "1e-9", "margin tolerance"},

    {CheckKind::mcflow, "m", "int", false, "64", "grid nodes"},
    {CheckKind::mcflow, "dy", "real", false, "0.1", "grid spacing"},
    {CheckKind::mcflow, "r_max", "real", true, "", "flow horizon"},
    {CheckKind::mcflow, "dr", "real", true, "", "step (must satisfy dr <= dy^2/2)"},
    {CheckKind::mcflow, "phi0", "expr-y", true, "", "initial phi(y)"},
    {CheckKind::mcflow, "f_slice", "expr-y", false, "0", "f restricted to the slice"},
    {CheckKind::mcflow, "H_f", "expr-y", false, "0", "weighted mean curvature per node"},
    {CheckKind::mcflow, "f_prime", "expr-y", false, "0", "normal derivative of f per node"},
    {CheckKind::mcflow, "shear_sq", "expr-y", false, "0", "|sigma|^2 per node"},
    {CheckKind::mcflow, "ric", "expr-y", false, "0", "Ric^N_f(nu,nu) per node"},
    {CheckKind::mcflow, "n", "int", false, "4", "spacetime dimension"},
    {CheckKind::mcflow, "N", "N", false, "inf", "synthetic dimension"},
    {CheckKind::mcflow, "gauge", "bool", false, "false", "also evolve the gauged variable"},

    {CheckKind::rigidity, "lambda_case", "enum:zero,minus-n-minus-1,minus-N-minus-1", true, "",
     "equality threshold"},
    {CheckKind::rigidity, "N", "N", false, "inf", "synthetic dimension"},
    {CheckKind::rigidity, "surface_t", "real", false, "0", "slice to examine"},
    {CheckKind::rigidity, "y_from", "real", false, "", "fiber range start"},
    {CheckKind::rigidity, "y_to", "real", false, "", "fiber range end"},
    {CheckKind::rigidity, "y_samples", "int", false, "5", "sampled points"},
    {CheckKind::rigidity, "tolerance", "real", false, "1e-10", "vanishing tolerance"},

    {CheckKind::example_1_8, "bisect_lo", "real", false, "0.05", "bisection bracket start"},
    {CheckKind::example_1_8, "bisect_hi", "real", false, "2.0", "bisection bracket end"},
    {CheckKind::example_1_8, "bisect_tol", "real", false, "1e-3", "bisection tolerance"},
};

bool check_needs_model(CheckKind k) {
  switch (k) {
    case CheckKind::tcd:
    case CheckKind::integrate:
    case CheckKind::lemma_bound:
    case CheckKind::theorem:
    case CheckKind::rigidity:
      return true;
    default:
      return false;
  }
}

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;

void validate_expression(const std::string& text, bool allow_y, int line,
                         std::vector<ConfigError>& errors) {
  try {
    auto e = expr::Expression::parse(text);
    if (!allow_y && e.depends_on_y()) {
      errors.push_back({line, "expression must not depend on y here: '" + text + "'"});
    }
  } catch (const expr::ParseError& pe) {
    errors.push_back({line, "expression error: " + std::string(pe.what())});
  }
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  auto& errors = result.errors;

  Section top, model, params, expect;
  bool has_model_section = false;
  {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          errors.push_back({line_no, "malformed section header"});
          continue;
        }
        section = line.substr(1, line.size() - 2);
        if (section != "model" && section != "parameters" && section != "expect") {
          errors.push_back({line_no, "unknown section [" + section + "]"});
          section = "!invalid";
        }
        if (section == "model") has_model_section = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        errors.push_back({line_no, "expected key = value"});
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        errors.push_back({line_no, "empty key"});
        continue;
      }
      Section* dest = nullptr;
      if (section.empty()) {
        dest = &top;
      } else if (section == "model") {
        dest = &model;
      } else if (section == "parameters") {
        dest = &params;
      } else if (section == "expect") {
        dest = &expect;
      } else {
        continue;  // already reported the unknown section
      }
      if (dest->count(key)) {
        errors.push_back({line_no, "duplicate key '" + key + "'"});
        continue;
      }
      (*dest)[key] = Entry{value, line_no};
    }
  }

  ScenarioConfig config;

  // Top level
  for (const auto& [key, entry] : top) {
    if (key == "name") {
      config.name = entry.value;
    } else if (key == "check") {
      if (auto k = check_from_name(entry.value)) {
        config.check = *k;
      } else {
        errors.push_back({entry.line, "unknown check '" + entry.value + "'"});
      }
    } else if (key == "out") {
      config.out = entry.value;
    } else {
      errors.push_back({entry.line, "unknown key '" + key + "'"});
    }
  }
  if (!top.count("name")) errors.push_back({0, "missing required key 'name'"});
  if (!top.count("check")) errors.push_back({0, "missing required key 'check'"});
  if (!errors.empty() && !top.count("check")) {
    return result;
  }

  // Model section
  if (has_model_section && !check_needs_model(config.check)) {
    errors.push_back({0, "check '" + check_name(config.check) + "' does not take a [model] section"});
  }
  if (check_needs_model(config.check) && !has_model_section) {
    errors.push_back({0, "check '" + check_name(config.check) + "' requires a [model] section"});
  }
  if (has_model_section && check_needs_model(config.check)) {
    ModelSpec spec;
    bool twisted = false;
    if (auto it = model.find("kind"); it != model.end()) {
      if (it->second.value == "twisted") {
        twisted = true;
        spec.kind = ModelSpec::Kind::twisted;
      } else if (it->second.value != "warped") {
        errors.push_back({it->second.line, "kind must be 'warped' or 'twisted'"});
      }
    }
    for (const auto& [key, entry] : model) {
      if (key == "kind") continue;
      if (key == "dimension") {
        if (auto v = parse_int(entry.value); v && *v >= 2 && *v <= 16) {
          spec.dimension = static_cast<int>(*v);
        } else {
          errors.push_back({entry.line, "dimension must be an integer in [2, 16]"});
        }
      } else if (key == "warp") {
        spec.warp = entry.value;
        validate_expression(entry.value, twisted, entry.line, errors);
      } else if (key == "weight") {
        spec.weight = entry.value;
        validate_expression(entry.value, twisted, entry.line, errors);
      } else if (key == "fiber") {
        std::istringstream fs_in(entry.value);
        std::string kind;
        fs_in >> kind;
        if (kind == "flat") {
          spec.fiber_kind = FiberKind::flat;
        } else if (kind == "sphere" || kind == "bound") {
          double v = 0.0;
          if (fs_in >> v) {
            spec.fiber_kind = kind == "sphere" ? FiberKind::sphere : FiberKind::bound;
            spec.fiber_value = v;
          } else {
            errors.push_back({entry.line, "fiber '" + kind + "' needs a numeric value"});
          }
        } else {
          errors.push_back({entry.line, "fiber must be 'flat', 'sphere <v>' or 'bound <v>'"});
        }
        std::string extra;
        if (fs_in >> extra) errors.push_back({entry.line, "trailing input in fiber spec"});
      } else if (key == "t_range" || key == "y_range") {
        std::istringstream rs(entry.value);
        double lo = 0, hi = 0;
        std::string extra;
        if (rs >> lo >> hi && !(rs >> extra) && lo < hi) {
          if (key == "t_range") {
            spec.t_min = lo;
            spec.t_max = hi;
          } else {
            spec.y_min = lo;
            spec.y_max = hi;
          }
        } else {
          errors.push_back({entry.line, key + " must be two numbers '<lo> <hi>' with lo < hi"});
        }
        if (key == "y_range" && !twisted) {
          errors.push_back({entry.line, "y_range applies to twisted models"});
        }
      } else if (key == "fd_step") {
        if (auto v = parse_double(entry.value); v && *v > 0) {
          spec.fd_step = *v;
        } else {
          errors.push_back({entry.line, "fd_step must be a positive number"});
        }
        if (!twisted) errors.push_back({entry.line, "fd_step applies to twisted models"});
      } else {
        errors.push_back({entry.line, "unknown model key '" + key + "'"});
      }
    }
    if (twisted && spec.fiber_kind != FiberKind::flat) {
      errors.push_back({0, "twisted models use a flat fiber"});
    }
    config.model = spec;
  }

  // Parameters
  for (const auto& [key, entry] : params) {
    const ParamInfo* info = nullptr;
    for (const auto& p : kParams) {
      if (p.check == config.check && key == p.key) {
        info = &p;
        break;
      }
    }
    if (!info) {
      errors.push_back({entry.line, "unknown parameter '" + key + "' for check '" +
                                        check_name(config.check) + "'"});
      continue;
    }
    const std::string type = info->type;
    if (type == "real") {
      if (!parse_double(entry.value)) {
        errors.push_back({entry.line, "parameter '" + key + "' must be a number"});
      }
    } else if (type == "int") {
      if (!parse_int(entry.value)) {
        errors.push_back({entry.line, "parameter '" + key + "' must be an integer"});
      }
    } else if (type == "bool") {
      if (!parse_bool(entry.value)) {
        errors.push_back({entry.line, "parameter '" + key + "' must be true or false"});
      }
    } else if (type == "N") {
      if (!parse_N(entry.value)) {
        errors.push_back({entry.line, "parameter '" + key + "' must be a number or 'inf'"});
      }
    } else if (type == "expr-t") {
      if (!(key == "ric" && entry.value == "model")) {
        validate_expression(entry.value, false, entry.line, errors);
      }
    } else if (type == "expr-ty" || type == "expr-y") {
      validate_expression(entry.value, true, entry.line, errors);
    } else if (type.rfind("enum:", 0) == 0) {
      bool found = false;
      std::istringstream opts_in(type.substr(5));
      std::string opt;
      while (std::getline(opts_in, opt, ',')) {
        if (opt == entry.value) found = true;
      }
      if (!found) {
        errors.push_back({entry.line, "parameter '" + key + "' must be one of " + type.substr(5)});
      }
    }
    config.parameters[key] = entry.value;
  }
  for (const auto& p : kParams) {
    if (p.check == config.check && p.required && !config.parameters.count(p.key)) {
      errors.push_back({0, std::string("missing required parameter '") + p.key + "' for check '" +
                               check_name(config.check) + "'"});
    }
  }

  for (const auto& [key, entry] : expect) {
    config.expect[key] = entry.value;
  }

  // Cross-field validation that needs no numerics.
  if (errors.empty()) {
    const auto get = [&](const char* key) -> std::optional<std::string> {
      auto it = config.parameters.find(key);
      if (it == config.parameters.end()) return std::nullopt;
      return it->second;
    };
    const auto N = parse_N(get("N").value_or("inf")).value();
    const int n = config.model ? config.model->dimension
                               : static_cast<int>(parse_int(get("n").value_or("4")).value_or(4));
    if (!N.admissible_for(n)) {
      errors.push_back({0, "synthetic dimension " + N.str() + " is inadmissible for n = " +
                               std::to_string(n)});
    }
    if (config.check == CheckKind::lemma_bound) {
      const std::string regime = get("regime").value_or("");
      const bool needs_finite_above_n = regime == "desitter-N";
      if (needs_finite_above_n &&
          (N.is_infinite() || N.value() <= static_cast<double>(n))) {
        errors.push_back(
            {0, "regime desitter-N requires a finite synthetic dimension N > dimension"});
      }
    }
    if (config.check == CheckKind::rigidity) {
      if (get("lambda_case") == "minus-N-minus-1" &&
          (N.is_infinite() || N.value() <= static_cast<double>(n))) {
        errors.push_back(
            {0, "lambda_case minus-N-minus-1 requires a finite synthetic dimension N > dimension"});
      }
    }
    if (config.check == CheckKind::mcflow) {
      const auto dy = parse_double(get("dy").value_or("0.1")).value_or(0.1);
      const auto dr = parse_double(get("dr").value_or("0")).value_or(0.0);
      if (dr > 0.5 * dy * dy * (1.0 + 1e-12)) {
        errors.push_back({0, "stability violation: dr must satisfy dr <= dy^2/2"});
      }
    }
  }

  if (errors.empty()) result.config = config;
  return result;
}

std::string serialize(const ScenarioConfig& config) {
  std::ostringstream os;
  os << "name = " << config.name << "\n";
  os << "check = " << check_name(config.check) << "\n";
  if (!config.out.empty()) os << "out = " << config.out << "\n";
  if (config.model) {
    const ModelSpec& m = *config.model;
    os << "\n[model]\n";
    os << "kind = " << (m.kind == ModelSpec::Kind::twisted ? "twisted" : "warped") << "\n";
    os << "dimension = " << m.dimension << "\n";
    os << "warp = " << m.warp << "\n";
    switch (m.fiber_kind) {
      case FiberKind::flat:
        os << "fiber = flat\n";
        break;
      case FiberKind::sphere:
        os << "fiber = sphere " << fmt(m.fiber_value) << "\n";
        break;
      case FiberKind::bound:
        os << "fiber = bound " << fmt(m.fiber_value) << "\n";
        break;
    }
    os << "weight = " << m.weight << "\n";
    os << "t_range = " << fmt(m.t_min) << " " << fmt(m.t_max) << "\n";
    if (m.kind == ModelSpec::Kind::twisted) {
      os << "y_range = " << fmt(m.y_min) << " " << fmt(m.y_max) << "\n";
      os << "fd_step = " << fmt(m.fd_step) << "\n";
    }
  }
  if (!config.parameters.empty()) {
    os << "\n[parameters]\n";
    for (const auto& [k, v] : config.parameters) os << k << " = " << v << "\n";
  }
  if (!config.expect.empty()) {
    os << "\n[expect]\n";
    for (const auto& [k, v] : config.expect) os << k << " = " << v << "\n";
  }
  return os.str();
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = serialize(config);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

geometry::SpacetimeModel build_model(const ModelSpec& spec) {
  const auto warp_expr = expr::Expression::parse(spec.warp);
  const auto weight_expr = expr::Expression::parse(spec.weight);
  if (spec.kind == ModelSpec::Kind::warped) {
    geometry::WarpedModel m;
    m.n = spec.dimension;
    m.warp = [warp_expr](double t) {
      const Jet2 j = warp_expr.jet(t, 0.0);
      return geometry::D2{j.v, j.dt, j.dtt};
    };
    m.weight = [weight_expr](double t) {
      const Jet2 j = weight_expr.jet(t, 0.0);
      return geometry::D2{j.v, j.dt, j.dtt};
    };
    switch (spec.fiber_kind) {
      case FiberKind::flat:
        m.fiber = geometry::ConstantCurvatureFiber{0.0};
        break;
      case FiberKind::sphere:
        m.fiber = geometry::ConstantCurvatureFiber{spec.fiber_value};
        break;
      case FiberKind::bound:
        m.fiber = geometry::RicciBoundFiber{spec.fiber_value};
        break;
    }
    m.t_domain = {spec.t_min, spec.t_max};
    return m;
  }
  geometry::TwistedModel m;
  m.n = spec.dimension;
  m.warp = [warp_expr](double t, double y) { return warp_expr.jet(t, y); };
  m.weight = [weight_expr](double t, double y) { return weight_expr.jet(t, y); };
  m.t_domain = {spec.t_min, spec.t_max};
  m.y_domain = {spec.y_min, spec.y_max};
  m.fd_step = spec.fd_step;
  return m;
}

namespace {

// Typed access to validated parameters.
class Params {
 public:
  explicit Params(const ScenarioConfig& c) : c_(c) {}
  double real(const char* key, double fallback) const {
    auto it = c_.parameters.find(key);
    return it == c_.parameters.end() ? fallback : parse_double(it->second).value();
  }
  std::optional<double> real_opt(const char* key) const {
    auto it = c_.parameters.find(key);
    if (it == c_.parameters.end()) return std::nullopt;
    return parse_double(it->second).value();
  }
  int integer(const char* key, int fallback) const {
    auto it = c_.parameters.find(key);
    return it == c_.parameters.end() ? fallback : static_cast<int>(parse_int(it->second).value());
  }
  bool boolean(const char* key, bool fallback) const {
    auto it = c_.parameters.find(key);
    return it == c_.parameters.end() ? fallback : parse_bool(it->second).value();
  }
  SyntheticDimension N() const {
    auto it = c_.parameters.find("N");
    return it == c_.parameters.end() ? SyntheticDimension::infinite() : parse_N(it->second).value();
  }
  std::string str(const char* key, const std::string& fallback = "") const {
    auto it = c_.parameters.find(key);
    return it == c_.parameters.end() ? fallback : it->second;
  }

 private:
  const ScenarioConfig& c_;
};

geometry::GridSpec grid_from(const Params& p, const ModelSpec& spec) {
  geometry::GridSpec g;
  const double margin =
      spec.kind == ModelSpec::Kind::twisted ? 5.0 * spec.fd_step * 8.0 : 0.0;
  g.t_min = p.real("t_from", spec.t_min + margin);
  g.t_max = p.real("t_to", spec.t_max - margin);
  g.y_min = p.real("y_from", spec.kind == ModelSpec::Kind::twisted ? spec.y_min + margin : 0.0);
  g.y_max = p.real("y_to", spec.kind == ModelSpec::Kind::twisted ? spec.y_max - margin : 0.0);
  g.t_count = p.integer("t_samples", 21);
  g.y_count = p.integer("y_samples", spec.kind == ModelSpec::Kind::twisted ? 9 : 1);
  g.chi_count = p.integer("chi_samples", 33);
  g.chi_max = p.real("chi_max", 5.0);
  return g;
}

struct ArtifactWriter {
  fs::path dir;
  std::vector<std::string>* names;
  void write(const std::string& filename, const std::string& content) const {
    std::ofstream out(dir / filename, std::ios::binary);
    out << content;
    names->push_back(filename);
  }
};

void run_tcd(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
             const ArtifactWriter& aw) {
  const Params p(config);
  const auto model = build_model(*config.model);
  const auto N = p.N();
  geometry::LambdaFn lambda;
  const std::string lambda_text = p.str("lambda", "0");
  if (lambda_text != "0") {
    const auto e = expr::Expression::parse(lambda_text);
    lambda = [e](double t, double y) { return e.value(t, y); };
  }
  geometry::TcdOptions topts;
  topts.tolerance = p.real("tolerance", opts.tolerance);
  topts.exec = opts.exec;
  auto report = geometry::check_tcd(model, N, lambda, grid_from(p, *config.model), topts);
  report.lambda_text = lambda_text;
  rep.verdicts["tcd"] = focusing::to_json(report);
  rep.verdicts["satisfied"] = report.satisfied;
  aw.write(config.name + ".tcd.json", focusing::to_json(report).dump(2) + "\n");
}

void run_integrate(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                   const ArtifactWriter& aw) {
  const Params p(config);
  const auto model = build_model(*config.model);
  const auto N = p.N();
  const int n = geometry::dimension(model);
  const double y0 = p.real("y0", 0.0);
  const auto profile = congruence::FProfile::from_model(model, y0);

  std::function<double(double)> ric;
  const std::string ric_text = p.str("ric", "model");
  if (ric_text == "model") {
    auto shared = std::make_shared<geometry::SpacetimeModel>(model);
    ric = [shared, N, y0](double t) { return geometry::ric_time_time(*shared, N, t, y0); };
  } else {
    const auto e = expr::Expression::parse(ric_text);
    ric = [e](double t) { return e.value(t, 0.0); };
  }
  congruence::IntegrateOptions io;
  io.rel_tol = p.real("rel_tol", 1e-10);
  const std::string shear_text = p.str("shear", "0");
  if (shear_text != "0") {
    const auto e = expr::Expression::parse(shear_text);
    io.shear_sq = [e](double t) { return e.value(t, 0.0); };
  }
  congruence::CongruenceState init{0.0, 0.0, p.real("x0", 0.0), io.shear_sq ? io.shear_sq(0) : 0.0};
  const auto traj = congruence::integrate(init, profile, ric, n, N, p.real("t_max", 1.0), io);
  (void)opts;

  std::ostringstream csv;
  congruence::write_trajectory_csv(csv, traj, profile, n);
  aw.write(config.name + ".trajectory.csv", csv.str());

  rep.verdicts["blowup"] = focusing::to_json(traj.blowup);
  rep.verdicts["blowup_detected"] = traj.blowup.detected;
  rep.verdicts["steps_recorded"] = traj.states.size();
  if (traj.blowup.t_blowup) rep.verdicts["t_blowup"] = *traj.blowup.t_blowup;
}

void run_lemma_bound(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                     const ArtifactWriter& aw) {
  const Params p(config);
  const auto model = build_model(*config.model);
  const int n = geometry::dimension(model);
  const double n1 = n - 1;
  const auto N = p.N();
  const double delta = p.real("delta", 1.0);
  const double y0 = p.real("y0", 0.0);
  const auto profile = congruence::FProfile::from_model(model, y0);
  const std::string regime = p.str("regime");

  focusing::FocusingVerdict verdict;
  double x0 = 0.0;                     // comparison initial condition at the threshold
  std::function<double(double)> ric;   // worst-case curvature
  double s_shift = 0.0;                // shift for the s-parameter of the bounded route

  if (regime == "nonneg") {
    verdict.parameterization = focusing::Parameterization::proper_time;
    if (!N.is_infinite() && N.value() > n) {
      verdict.applicable = true;
      verdict.t_p = focusing::tp_finite_N(n, N.value(), delta);
    } else {
      const auto tp = focusing::tp_nonneg(profile, n, delta);
      verdict.applicable = tp.applicable;
      if (tp.applicable) {
        verdict.t_p = tp.value;
      } else {
        verdict.reason = tp.reason;
      }
    }
    x0 = -delta;
    ric = [](double) { return 0.0; };
  } else if (regime == "desitter-conformal") {
    verdict.parameterization = focusing::Parameterization::s_parameter;
    verdict.applicable = true;
    verdict.t_p = focusing::tp_desitter_conformal(delta);
    x0 = -(1.0 + delta) * std::exp(-2.0 * profile.f(0.0) / n1);
    const auto prof = profile;
    ric = [n1, prof](double t) { return -n1 * std::exp(-4.0 * prof.f(t) / n1); };
  } else if (regime == "desitter-constant") {
    if (!N.is_infinite() && N.value() > n) {
      verdict.parameterization = focusing::Parameterization::proper_time;
      const auto tp = focusing::tp_desitter_finite_N(n, N.value(), delta);
      verdict.applicable = tp.applicable;
      if (tp.applicable) {
        verdict.t_p = tp.value;
      } else {
        verdict.reason = tp.reason;
      }
      x0 = -(1.0 + delta);
    } else {
      focusing::FocusingHypotheses hyp;
      hyp.regime = focusing::Regime::desitter_constant;
      hyp.n = n;
      hyp.N = N;
      hyp.delta = delta;
      hyp.f0 = profile.f(0.0);
      hyp.k = p.real_opt("k");
      hyp.grad_f_future_causal = p.boolean("grad_f_future_causal", false);
      verdict = focusing::corollary_bounds(hyp);
      x0 = verdict.applicable ? focusing::corollary_threshold(hyp) : 0.0;
      s_shift = hyp.grad_f_future_causal ? hyp.f0 : hyp.k.value_or(0.0);
    }
    ric = [n1](double) { return -n1; };
  } else {  // desitter-N
    verdict.parameterization = focusing::Parameterization::proper_time;
    verdict.applicable = true;
    verdict.t_p = focusing::tp_desitter_conformal(delta);  // same closed form, proper time
    x0 = -(N.value() - 1.0) * (1.0 + delta) / n1;
    const double lam = -(N.value() - 1.0);
    ric = [lam](double) { return lam; };
  }

  if (verdict.applicable && p.boolean("verify", true) && verdict.t_p) {
    congruence::CongruenceState init{0.0, 0.0, x0, 0.0};
    double t_max = 0.0;
    if (verdict.parameterization == focusing::Parameterization::proper_time) {
      t_max = *verdict.t_p * 1.5 + 1.0;
    } else {
      t_max = 50.0;
    }
    const auto traj = congruence::integrate(init, profile, ric, n, N, t_max);
    verdict.observed = traj.blowup;
    if (traj.blowup.detected && traj.blowup.t_blowup) {
      const double tb = *traj.blowup.t_blowup;
      if (verdict.parameterization == focusing::Parameterization::proper_time) {
        verdict.observed_blowup_param = tb;
      } else {
        verdict.observed_blowup_param = std::exp(2.0 * s_shift / n1) *
                                        congruence::s_of_t(profile, n, tb);
      }
      verdict.bound_respected = *verdict.observed_blowup_param <= *verdict.t_p + 1e-6;
    } else {
      verdict.bound_respected = false;
    }
    std::ostringstream csv;
    congruence::write_trajectory_csv(csv, traj, profile, n);
    aw.write(config.name + ".trajectory.csv", csv.str());
  }

  rep.verdicts["verdict"] = focusing::to_json(verdict);
  rep.verdicts["applicable"] = verdict.applicable;
  if (verdict.t_p) rep.verdicts["t_p_predicted"] = *verdict.t_p;
  if (verdict.bound_respected.has_value()) {
    rep.verdicts["bound_respected"] = *verdict.bound_respected;
  }
  (void)opts;
}

void run_theorem(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                 const ArtifactWriter& aw) {
  const Params p(config);
  const auto model = build_model(*config.model);
  focusing::TheoremOptions topts;
  topts.N = p.N();
  topts.grid = grid_from(p, *config.model);
  topts.tolerance = p.real("tolerance", opts.tolerance);
  topts.horizon = p.real("horizon", 50.0);
  topts.k = p.real_opt("k");
  topts.grad_f_future_causal = p.boolean("grad_f_future_causal", false);
  topts.exec = opts.exec;
  if (auto d = p.real_opt("decay_from")) topts.profile_decay = congruence::DecayCertificate{*d};

  focusing::TheoremId id = focusing::TheoremId::t1_4;
  const std::string name = p.str("theorem");
  if (name == "T1_6a") id = focusing::TheoremId::t1_6a;
  if (name == "T1_6b") id = focusing::TheoremId::t1_6b;
  if (name == "T1_7") id = focusing::TheoremId::t1_7;

  const auto report = focusing::theorem_checker(model, id, p.real("surface_t", 0.0), topts);
  rep.verdicts["theorem"] = focusing::to_json(report);
  rep.verdicts["applicable"] = report.aggregate.applicable;
  rep.verdicts["reason"] = report.aggregate.reason;
  if (report.aggregate.bound_respected.has_value()) {
    rep.verdicts["bound_respected"] = *report.aggregate.bound_respected;
  }
  aw.write(config.name + ".theorem.json", focusing::to_json(report).dump(2) + "\n");
}

void run_mcflow(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                const ArtifactWriter& aw) {
  const Params p(config);
  mcflow::FlowState state;
  state.grid.m = p.integer("m", 64);
  state.grid.dy = p.real("dy", 0.1);
  const int m = state.grid.m;
  const auto eval_on_grid = [&](const char* key, const char* fallback) {
    const auto e = expr::Expression::parse(p.str(key, fallback));
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) v[i] = e.value(0.0, i * state.grid.dy);
    return v;
  };
  state.phi = eval_on_grid("phi0", "0");
  state.f_slice = eval_on_grid("f_slice", "0");
  mcflow::FlowCoefficients coeffs;
  coeffs.H_f = eval_on_grid("H_f", "0");
  coeffs.f_prime = eval_on_grid("f_prime", "0");
  coeffs.shear_sq = eval_on_grid("shear_sq", "0");
  coeffs.ric_Nf = eval_on_grid("ric", "0");
  coeffs.n = p.integer("n", 4);
  coeffs.N = p.N();
  state.coeff_c.assign(m, 0.0);

  mcflow::EvolveOptions eo;
  eo.gauge = p.boolean("gauge", false);
  eo.exec = opts.exec;
  const auto traj = mcflow::evolve(state, coeffs, p.real("r_max", 1.0), p.real("dr", 1e-3), eo);

  std::ostringstream csv;
  mcflow::write_flow_csv(csv, traj);
  aw.write(config.name + ".flow.csv", csv.str());
  if (eo.gauge) {
    mcflow::FlowTrajectory gauged;
    gauged.r = traj.r;
    gauged.phi = traj.u;
    std::ostringstream gcsv;
    mcflow::write_flow_csv(gcsv, gauged);
    aw.write(config.name + ".flow_gauged.csv", gcsv.str());
  }

  const auto& last = traj.phi.back();
  rep.verdicts["min_phi_final"] = *std::min_element(last.begin(), last.end());
  rep.verdicts["max_phi_final"] = *std::max_element(last.begin(), last.end());
  rep.verdicts["monotone_step"] = traj.monotone;
  long first_all_negative = -1;
  for (std::size_t k = 0; k < traj.phi.size(); ++k) {
    if (std::all_of(traj.phi[k].begin(), traj.phi[k].end(), [](double v) { return v < 0.0; })) {
      first_all_negative = static_cast<long>(k);
      break;
    }
  }
  rep.verdicts["first_all_negative_record"] = first_all_negative;
  if (eo.gauge) {
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.r.size(); ++k) {
      const double factor = std::exp(traj.gauge_a * traj.r[k]);
      for (int i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(traj.u[k][i] * factor - traj.phi[k][i]));
      }
    }
    rep.verdicts["gauge_consistency"] = worst;
  }
}

void run_rigidity(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                  const ArtifactWriter& aw) {
  const Params p(config);
  const auto model = build_model(*config.model);
  const auto N = p.N();
  const double surface_t = p.real("surface_t", 0.0);
  const double tol = p.real("tolerance", 1e-10);
  mcflow::LambdaCase lc = mcflow::LambdaCase::zero;
  if (p.str("lambda_case") == "minus-n-minus-1") lc = mcflow::LambdaCase::minus_n_minus_1;
  if (p.str("lambda_case") == "minus-N-minus-1") lc = mcflow::LambdaCase::minus_N_minus_1;

  const int ny = p.integer("y_samples", 5);
  const double y_from = p.real("y_from", 0.0);
  const double y_to = p.real("y_to", 0.0);

  nlohmann::json points = nlohmann::json::array();
  bool all_rigid = true;
  double max_term = 0.0;
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? y_from : y_from + (y_to - y_from) * j / (ny - 1);
    const auto slice = geometry::slice_mean_curvatures(model, surface_t, y);
    const auto profile = congruence::FProfile::from_model(model, y);
    const double fp = profile.f1(surface_t);
    const double ric = geometry::ric_time_time(model, N, surface_t, y);
    const auto repnt = mcflow::rigidity_decomposition(slice.H_f, fp, 0.0, ric,
                                                      geometry::dimension(model), N, lc, tol);
    all_rigid = all_rigid && repnt.rigid;
    max_term = std::max(max_term, repnt.max_abs_term);
    points.push_back({{"y", y}, {"report", mcflow::to_json(repnt)}});
  }
  rep.verdicts["points"] = points;
  rep.verdicts["rigid"] = all_rigid;
  rep.verdicts["max_abs_term"] = max_term;
  aw.write(config.name + ".rigidity.json", points.dump(2) + "\n");
  (void)opts;
}

// Built-in reproduction of the static-universe reference model: weighted
// curvature positive for every admissible N, strictly negative weighted
// mean curvature, finite reparametrized length, and the nonnegative-case
// criterion correctly inapplicable.
void run_example_1_5(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                     const ArtifactWriter& aw) {
  geometry::WarpedModel m;
  m.n = 4;
  m.warp = geometry::constant_fn(1.0);
  m.fiber = geometry::ConstantCurvatureFiber{1.0};
  m.weight = [](double t) {
    const double e = std::exp(t);
    return geometry::D2{e, e, e};
  };

  geometry::GridSpec grid;
  grid.t_min = 0.0;
  grid.t_max = 2.0;
  grid.t_count = 41;
  grid.y_count = 1;
  grid.chi_count = 33;
  grid.chi_max = 5.0;

  const std::map<std::string, SyntheticDimension> regimes = {
      {"tcd_N_minus2", SyntheticDimension::finite(-2.0)},
      {"tcd_N_1", SyntheticDimension::finite(1.0)},
      {"tcd_N_inf", SyntheticDimension::infinite()},
  };
  nlohmann::json margins;
  for (const auto& [key, N] : regimes) {
    const auto r = geometry::check_tcd(m, N, nullptr, grid, {opts.tolerance, opts.exec});
    rep.verdicts[key] = r.satisfied;
    margins[key] = r.worst_margin;
  }
  rep.verdicts["tcd_worst_margins"] = margins;

  double hf_err = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double t = 2.0 * i / 40.0;
    const auto sc = geometry::slice_mean_curvatures(m, t);
    hf_err = std::max(hf_err, std::abs(sc.H_f + std::exp(t)));
  }
  rep.verdicts["hf_max_error"] = hf_err;
  rep.verdicts["hf_matches_closed_form"] = hf_err <= 1e-12;

  congruence::ProfileOptions po;
  po.decay = congruence::DecayCertificate{0.0};
  const auto profile = congruence::FProfile::from_model(m, 0.0, po);
  const auto comp = congruence::is_future_f_complete(profile, 4, 10.0, 10.0);
  rep.verdicts["f_completeness"] =
      comp.verdict == congruence::Completeness::incomplete_certified
          ? "incomplete-certified"
          : (comp.verdict == congruence::Completeness::complete_up_to_horizon
                 ? "complete-up-to-horizon"
                 : "undetermined");
  if (comp.s_infinity) {
    rep.verdicts["s_infinity_upper"] = comp.s_infinity->upper;
    rep.verdicts["s_infinity_lower"] = comp.s_infinity->lower;
  }

  focusing::TheoremOptions topts;
  topts.N = SyntheticDimension::infinite();
  topts.grid = grid;
  topts.profile_decay = congruence::DecayCertificate{0.0};
  topts.exec = opts.exec;
  const auto theorem = focusing::theorem_checker(m, focusing::TheoremId::t1_4, 0.0, topts);
  rep.verdicts["theorem_T1_4"] = theorem.aggregate.applicable ? "applicable" : "inapplicable";
  rep.verdicts["theorem_T1_4_reason"] = theorem.aggregate.reason;
  aw.write(config.name + ".theorem.json", focusing::to_json(theorem).dump(2) + "\n");
}

// Built-in reproduction of the bounded-oscillation conformal model: the
// fiber-curvature threshold for the sampled TCD(0,1) check is located by
// bisection and the slices have identically vanishing weighted mean
// curvature.
void run_example_1_8(const ScenarioConfig& config, const RunOptions& opts, RunReport& rep,
                     const ArtifactWriter& aw) {
  const Params p(config);
  const int n = 3;
  const geometry::SmoothFn1 weight = [](double t) {
    return geometry::D2{0.5 * std::sin(t), 0.5 * std::cos(t), -0.5 * std::sin(t)};
  };
  geometry::GridSpec grid;
  grid.t_min = 0.0;
  grid.t_max = 2.0 * 3.14159265358979323846;
  grid.t_count = 401;
  grid.y_count = 1;
  grid.chi_count = 33;
  grid.chi_max = 5.0;

  const double lo = p.real("bisect_lo", 0.05);
  const double hi = p.real("bisect_hi", 2.0);
  const double tol = p.real("bisect_tol", 1e-3);
  const auto N1 = SyntheticDimension::finite(1.0);
  const double threshold = geometry::fiber_curvature_threshold(
      n, weight, N1, grid, lo, hi, tol, {opts.tolerance, opts.exec});
  rep.verdicts["threshold"] = threshold;

  const auto model_at = [&](double curv) {
    geometry::WarpedModel m;
    m.n = n;
    m.weight = weight;
    m.warp = [weight](double t) {
      const geometry::D2 f = weight(t);
      const double av = std::exp(0.5 * f.v);
      return geometry::D2{av, av * 0.5 * f.d1, av * (0.25 * f.d1 * f.d1 + 0.5 * f.d2)};
    };
    m.fiber = geometry::ConstantCurvatureFiber{curv};
    return m;
  };
  const auto above =
      geometry::check_tcd(model_at(threshold + 10.0 * tol), N1, nullptr, grid, {opts.tolerance, opts.exec});
  const auto below =
      geometry::check_tcd(model_at(threshold - 10.0 * tol), N1, nullptr, grid, {opts.tolerance, opts.exec});
  rep.verdicts["tcd_above"] = above.satisfied;
  rep.verdicts["tcd_below"] = below.satisfied;
  rep.verdicts["margin_above"] = above.worst_margin;
  rep.verdicts["margin_below"] = below.worst_margin;

  double hf_max = 0.0;
  const auto m = model_at(threshold + 10.0 * tol);
  for (int i = 0; i <= 64; ++i) {
    const double t = grid.t_min + (grid.t_max - grid.t_min) * i / 64.0;
    hf_max = std::max(hf_max, std::abs(geometry::slice_mean_curvatures(m, t).H_f));
  }
  rep.verdicts["hf_max_abs"] = hf_max;
  rep.verdicts["hf_zero"] = hf_max <= 1e-12;
  aw.write(config.name + ".threshold.json",
           nlohmann::json({{"threshold", threshold}}).dump(2) + "\n");
}

std::string json_value_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

nlohmann::json report_json(const RunReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["check"] = report.check;
  j["verdicts"] = report.verdicts;
  j["artifacts"] = report.artifacts;
  j["tool_version"] = report.tool_version;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["expected"] = {{"pass", report.all_expected}, {"failures", report.failures}};
  return j;
}

RunReport run(const ScenarioConfig& config, const RunOptions& opts) {
  RunReport rep;
  rep.name = config.name;
  rep.check = check_name(config.check);
  rep.tool_version = kToolVersion;
  rep.config_hash = config_hash(config);
  rep.seed = opts.seed;

  const std::string outdir =
      !opts.out_override.empty() ? opts.out_override : (config.out.empty() ? "." : config.out);
  fs::create_directories(outdir);
  ArtifactWriter aw{fs::path(outdir), &rep.artifacts};

  const auto start = std::chrono::steady_clock::now();
  try {
    switch (config.check) {
      case CheckKind::tcd:
        run_tcd(config, opts, rep, aw);
        break;
      case CheckKind::integrate:
        run_integrate(config, opts, rep, aw);
        break;
      case CheckKind::lemma_bound:
        run_lemma_bound(config, opts, rep, aw);
        break;
      case CheckKind::theorem:
        run_theorem(config, opts, rep, aw);
        break;
      case CheckKind::mcflow:
        run_mcflow(config, opts, rep, aw);
        break;
      case CheckKind::rigidity:
        run_rigidity(config, opts, rep, aw);
        break;
      case CheckKind::example_1_5:
        run_example_1_5(config, opts, rep, aw);
        break;
      case CheckKind::example_1_8:
        run_example_1_8(config, opts, rep, aw);
        break;
    }
  } catch (const std::exception& e) {
    rep.verdicts["error"] = e.what();
    rep.failures.push_back(std::string("numeric failure: ") + e.what());
  }

  // Expectation matching by dotted path into the verdicts.
  for (const auto& [key, want] : config.expect) {
    const nlohmann::json* node = &rep.verdicts;
    std::istringstream path(key);
    std::string part;
    bool found = true;
    while (std::getline(path, part, '.')) {
      if (node->is_object() && node->contains(part)) {
        node = &(*node)[part];
      } else {
        found = false;
        break;
      }
    }
    if (!found) {
      rep.failures.push_back("expected key '" + key + "' not present in verdicts");
      continue;
    }
    const std::string got = json_value_to_string(*node);
    bool match = got == want;
    if (!match) {
      const auto a = parse_double(got);
      const auto b = parse_double(want);
      if (a && b) {
        match = std::abs(*a - *b) <= opts.tolerance * std::max({1.0, std::abs(*a), std::abs(*b)});
      }
    }
    if (!match) {
      rep.failures.push_back("expectation failed: " + key + " = " + got + ", wanted " + want);
    }
  }
  rep.all_expected = rep.failures.empty();

  const auto end = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();

  rep.artifacts.push_back(config.name + ".report.json");
  rep.artifacts.push_back(config.name + ".timing.json");
  std::sort(rep.artifacts.begin(), rep.artifacts.end());
  {
    std::ofstream out(fs::path(outdir) / (config.name + ".report.json"), std::ios::binary);
    out << report_json(rep).dump(2) << "\n";
  }
  {
    nlohmann::json timing;
    timing["wall_ms"] = rep.wall_ms;
    timing["written_at_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    std::ofstream out(fs::path(outdir) / (config.name + ".timing.json"), std::ios::binary);
    out << timing.dump(2) << "\n";
  }
  return rep;
}

const std::vector<std::pair<std::string, std::string>>& builtin_scenarios() {
  static const std::vector<std::pair<std::string, std::string>> builtins = {
      {"example-1-5",
       "# Static universe with exponentially growing weight: curvature positive,\n"
       "# slices contracting in the weighted sense, yet no focusing prediction\n"
       "# because the reparametrized length is finite.\n"
       "name = example-1-5\n"
       "check = example-1-5\n"
       "\n"
       "[expect]\n"
       "f_completeness = incomplete-certified\n"
       "hf_matches_closed_form = true\n"
       "tcd_N_1 = true\n"
       "tcd_N_inf = true\n"
       "tcd_N_minus2 = true\n"
       "theorem_T1_4 = inapplicable\n"},
      {"example-1-8",
       "# Bounded-oscillation conformal model: slices have vanishing weighted\n"
       "# mean curvature and the sampled TCD(0,1) check flips at a fiber\n"
       "# curvature threshold located by bisection.\n"
       "name = example-1-8\n"
       "check = example-1-8\n"
       "\n"
       "[expect]\n"
       "hf_zero = true\n"
       "tcd_above = true\n"
       "tcd_below = false\n"},
  };
  return builtins;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
  for (const auto& [n, text] : builtin_scenarios()) {
    if (n == name) {
      auto parsed = parse_scenario(text);
      return parsed.config;
    }
  }
  return std::nullopt;
}

nlohmann::json config_schema() {
  nlohmann::json schema;
  schema["format"] = "line-oriented key = value with [model], [parameters], [expect] sections;"
                     " '#' starts a comment; unknown keys are errors";
  schema["top_level"] = {
      {"name", "scenario name (required)"},
      {"check", "one of tcd, integrate, lemma-bound, theorem, mcflow, rigidity, "
                "example-1-5, example-1-8 (required)"},
      {"out", "output directory (optional)"},
  };
  schema["model"] = {
      {"kind", "warped | twisted (default warped)"},
      {"dimension", "spacetime dimension n >= 2"},
      {"warp", "expression a(t) (warped) or a(t, y) (twisted); must be positive"},
      {"fiber", "flat | sphere <curvature> | bound <ricci lower bound>"},
      {"weight", "expression f(t) (warped) or f(t, y) (twisted)"},
      {"t_range", "two numbers: domain of t"},
      {"y_range", "two numbers: domain of y (twisted)"},
      {"fd_step", "finite-difference step (twisted)"},
  };
  schema["expression_grammar"] =
      "constants, t, y, +, -, *, /, exp, sin, cos, tanh, pow(a, b); parse errors carry positions";
  nlohmann::json checks;
  for (const auto& p : kParams) {
    nlohmann::json row;
    row["type"] = p.type;
    row["required"] = p.required;
    if (p.fallback[0] != '\0') row["default"] = p.fallback;
    row["help"] = p.help;
    checks[check_name(p.check)][p.key] = row;
  }
  for (CheckKind k : {CheckKind::example_1_5}) {
    checks[check_name(k)] = nlohmann::json::object();
  }
  schema["checks"] = checks;
  schema["expect"] = "free-form key = value pairs matched against the report verdicts by "
                     "dotted path; numeric values compare within the run tolerance";
  return schema;
}

}  // namespace bem::scenario
