#include "bemlab/focusing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bem::focusing {

namespace {

double shifted_s(const congruence::FProfile& profile, int n, double t, double shift) {
  // s-parameter of the shifted weight f - shift:
  // int_0^t e^{-2(f - shift)/(n-1)} = e^{2 shift/(n-1)} s(t).
  return std::exp(2.0 * shift / static_cast<double>(n - 1)) * congruence::s_of_t(profile, n, t);
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::nonneg_tcd:
      return "nonneg";
    case Regime::desitter_conformal:
      return "desitter-conformal";
    case Regime::desitter_constant:
      return "desitter-constant";
    case Regime::desitter_N:
      return "desitter-N";
  }
  return "?";
}

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::t1_4:
      return "T1_4";
    case TheoremId::t1_6a:
      return "T1_6a";
    case TheoremId::t1_6b:
      return "T1_6b";
    case TheoremId::t1_7:
      return "T1_7";
  }
  return "?";
}

TpResult tp_nonneg(const congruence::FProfile& profile, int n, double delta, double bracket_cap) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  TpResult out;
  const double target = std::exp(-2.0 * profile.f(0.0) / static_cast<double>(n - 1)) / delta;

  if (auto bound = congruence::s_infinity_bound(profile, n)) {
    if (target > bound->upper) {
      out.reason = "s saturates below the focusing target: s(inf) <= " +
                   std::to_string(bound->upper) + " < " + std::to_string(target);
      return out;
    }
    if (target > bound->lower) {
      out.reason = "focusing target falls inside the certified tail bracket of s(inf); "
                   "cannot certify reachability";
      return out;
    }
  }

  double hi = 1.0;
  while (congruence::s_of_t(profile, n, hi) < target) {
    hi *= 2.0;
    if (hi > bracket_cap) {
      out.reason = "s did not reach the focusing target before the bracket cap";
      return out;
    }
  }
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  if (hi == 1.0) lo = 0.0;

  // Safeguarded Newton on s(t) - target; ds/dt = e^{-2f/(n-1)} is exact.
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = congruence::s_of_t(profile, n, t) - target;
    if (g > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double slope = std::exp(-2.0 * profile.f(t) / static_cast<double>(n - 1));
    double next = t - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-10) {
      t = next;
      break;
    }
    t = next;
  }
  out.applicable = true;
  out.value = t;
  return out;
}

double tp_finite_N(int n, double N_value, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  if (N_value <= static_cast<double>(n)) {
    throw std::domain_error("tp_finite_N requires N > n");
  }
  return (N_value - 1.0) / delta;
}

double tp_desitter_conformal(double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  return std::atanh(1.0 / (1.0 + delta));
}

TpResult tp_desitter_finite_N(int n, double N_value, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  if (N_value <= static_cast<double>(n)) {
    throw std::domain_error("tp_desitter_finite_N requires N > n");
  }
  TpResult out;
  const double arg = (N_value - 1.0) / (static_cast<double>(n - 1) * (1.0 + delta));
  if (arg >= 1.0) {
    out.reason = "arctanh argument (N-1)/((n-1)(1+delta)) = " + std::to_string(arg) +
                 " >= 1; the comparison bound does not apply";
    return out;
  }
  out.applicable = true;
  out.value = std::atanh(arg);
  return out;
}

double corollary_threshold(const FocusingHypotheses& hyp) {
  if (hyp.grad_f_future_causal) return -(1.0 + hyp.delta);
  if (!hyp.k) {
    throw std::invalid_argument("corollary threshold requires k or a future-causal gradient");
  }
  return -(1.0 + hyp.delta) * std::exp(2.0 * (*hyp.k - hyp.f0) / static_cast<double>(hyp.n - 1));
}

FocusingVerdict corollary_bounds(const FocusingHypotheses& hyp) {
  FocusingVerdict v;
  v.parameterization = Parameterization::s_parameter;
  if (hyp.regime != Regime::desitter_constant) {
    v.reason = "corollary reduction applies to the constant lower bound -(n-1) only";
    return v;
  }
  if (hyp.delta <= 0.0) {
    v.reason = "delta must be positive";
    return v;
  }
  require_admissible(hyp.N, hyp.n);
  if (!hyp.N.is_infinite() && hyp.N.value() > 1.0) {
    v.reason = "the reduction covers N <= 1 and the infinite regime; use the finite-N bound "
               "for N > n";
    return v;
  }
  if (!hyp.grad_f_future_causal && !hyp.k) {
    v.reason = "missing hypothesis: upper bound k of f (or a future-causal gradient)";
    return v;
  }

  const double threshold = corollary_threshold(hyp);
  if (hyp.grad_f_future_causal) {
    v.checks.push_back(
        {"future-causal gradient route: threshold x(0) <= -(1+delta)", true, threshold});
  } else {
    v.checks.push_back(
        {"shifted-weight route: threshold x(0) <= -(1+delta) e^{2(k-f0)/(n-1)}", true, threshold});
  }
  v.applicable = true;
  v.t_p = tp_desitter_conformal(hyp.delta);
  return v;
}

namespace {

struct TheoremPlan {
  geometry::LambdaFn lambda;  // lower bound assumed by the criterion
  bool needs_completeness = false;
  bool needs_finite_N_above_n = false;
  bool needs_low_N = false;
  Parameterization parameterization = Parameterization::proper_time;
};

}  // namespace

TheoremReport theorem_checker(const geometry::SpacetimeModel& model, TheoremId theorem,
                              double surface_t, const TheoremOptions& opts) {
  const int n = geometry::dimension(model);
  require_admissible(opts.N, n);
  const double n1 = static_cast<double>(n - 1);

  TheoremReport report;
  report.theorem = theorem;

  const bool low_N = opts.N.is_infinite() || opts.N.value() <= 1.0;

  const int ny = std::max(opts.grid.y_count, 1);
  std::vector<double> ys(ny);
  for (int j = 0; j < ny; ++j) {
    ys[j] = ny == 1 ? opts.grid.y_min
                    : opts.grid.y_min + (opts.grid.y_max - opts.grid.y_min) * j / (ny - 1);
  }

  // B := inf of f over the initial surface, sampled.
  double B = std::numeric_limits<double>::infinity();
  std::vector<congruence::FProfile> profiles;
  profiles.reserve(ys.size());
  for (double y : ys) {
    congruence::ProfileOptions po;
    po.decay = opts.profile_decay;
    po.probe_to = std::min(opts.horizon, 10.0);
    profiles.push_back(congruence::FProfile::from_model(model, y, po));
    B = std::min(B, profiles.back().f(surface_t));
  }

  TheoremPlan plan;
  switch (theorem) {
    case TheoremId::t1_4:
      plan.needs_completeness = low_N;
      plan.parameterization = Parameterization::proper_time;
      break;
    case TheoremId::t1_6a:
      plan.lambda = [n1](double, double) { return -n1; };
      plan.needs_finite_N_above_n = true;
      plan.parameterization = Parameterization::proper_time;
      break;
    case TheoremId::t1_6b:
      plan.needs_low_N = true;
      plan.needs_completeness = true;
      plan.parameterization = Parameterization::s_parameter;
      break;
    case TheoremId::t1_7:
      plan.lambda = [n1](double, double) { return -n1; };
      plan.needs_low_N = true;
      plan.parameterization = Parameterization::s_parameter;
      break;
  }

  FocusingVerdict& agg = report.aggregate;
  agg.parameterization = plan.parameterization;

  if (plan.needs_finite_N_above_n &&
      (opts.N.is_infinite() || opts.N.value() <= static_cast<double>(n))) {
    agg.reason = "criterion requires a finite synthetic dimension N > n";
    return report;
  }
  if (plan.needs_low_N && !low_N) {
    agg.reason = "criterion requires N <= 1 or the infinite regime";
    return report;
  }
  if (theorem == TheoremId::t1_7 && !opts.grad_f_future_causal && !opts.k) {
    agg.reason = "criterion requires either an upper bound k of f or a future-causal gradient";
    return report;
  }

  // The conformal criterion's lower bound depends on f through the model.
  if (theorem == TheoremId::t1_6b) {
    if (const auto* w = std::get_if<geometry::WarpedModel>(&model)) {
      const auto weight = w->weight;
      plan.lambda = [n1, weight](double t, double) {
        const double f = weight ? weight(t).v : 0.0;
        return -n1 * std::exp(-4.0 * f / n1);
      };
    } else {
      const auto& tw = std::get<geometry::TwistedModel>(model);
      const auto weight = tw.weight;
      plan.lambda = [n1, weight](double t, double y) {
        const double f = weight ? weight(t, y).v : 0.0;
        return -n1 * std::exp(-4.0 * f / n1);
      };
    }
  }

  report.tcd =
      geometry::check_tcd(model, opts.N, plan.lambda, opts.grid, {opts.tolerance, opts.exec});
  switch (theorem) {
    case TheoremId::t1_4:
      report.tcd.lambda_text = "0";
      break;
    case TheoremId::t1_6a:
    case TheoremId::t1_7:
      report.tcd.lambda_text = "-(n-1)";
      break;
    case TheoremId::t1_6b:
      report.tcd.lambda_text = "-(n-1)*exp(-4*f/(n-1))";
      break;
  }

  // Per-point strictness margins and deltas.
  const double k_shift = opts.k ? *opts.k : 0.0;
  report.points.resize(ys.size());
  std::string first_failure;
  double delta_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ys.size(); ++j) {
    PointVerdict& pv = report.points[j];
    pv.y = ys[j];
    const auto slice = geometry::slice_mean_curvatures(model, surface_t, ys[j]);
    pv.x0 = slice.H_f / n1;
    const double f0 = profiles[j].f(surface_t);
    double delta = 0.0;
    std::string check_name;
    double threshold = 0.0;
    switch (theorem) {
      case TheoremId::t1_4:
        check_name = "H_f < 0 on the initial surface";
        threshold = 0.0;
        delta = -pv.x0;
        break;
      case TheoremId::t1_6a:
        check_name = "H_f < -(n-1) on the initial surface";
        threshold = -1.0;
        delta = -pv.x0 - 1.0;
        break;
      case TheoremId::t1_6b:
        check_name = "H_f < -(n-1) e^{-2B/(n-1)} on the initial surface";
        threshold = -std::exp(-2.0 * B / n1);
        delta = -pv.x0 * std::exp(2.0 * f0 / n1) - 1.0;
        break;
      case TheoremId::t1_7:
        if (opts.grad_f_future_causal) {
          check_name = "H_f < -(n-1) on the initial surface";
          threshold = -1.0;
          delta = -pv.x0 - 1.0;
        } else {
          check_name = "H_f < -(n-1) e^{2(k-B)/(n-1)} on the initial surface";
          threshold = -std::exp(2.0 * (k_shift - B) / n1);
          delta = -pv.x0 * std::exp(-2.0 * (k_shift - f0) / n1) - 1.0;
        }
        break;
    }
    pv.delta = delta;
    pv.verdict.parameterization = plan.parameterization;
    const bool strict_ok = pv.x0 < threshold && delta > 0.0;
    pv.verdict.checks.push_back({check_name, strict_ok, delta});
    if (!strict_ok) {
      pv.verdict.reason = "failed: " + check_name;
      if (first_failure.empty()) first_failure = pv.verdict.reason;
    }
    delta_min = std::min(delta_min, delta);
  }
  report.delta_uniform = delta_min;

  // Assumption spot checks shared by all points.
  if (opts.grad_f_future_causal) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) {
      for (int i = 0; i <= 16; ++i) {
        const double t = surface_t + (opts.horizon - surface_t) * i / 16.0;
        worst = std::max(worst, p.f1(t));
      }
    }
    const bool ok = worst <= opts.tolerance;
    agg.checks.push_back({"future-causal gradient (f' <= 0 along sampled geodesics)", ok, -worst});
    if (!ok && first_failure.empty()) {
      first_failure = "failed: future-causal gradient (f' <= 0)";
    }
  } else if (theorem == TheoremId::t1_7 && opts.k) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) {
      for (int i = 0; i <= 16; ++i) {
        const double t = surface_t + (opts.horizon - surface_t) * i / 16.0;
        worst = std::max(worst, p.f(t) - *opts.k);
      }
    }
    const bool ok = worst <= opts.tolerance;
    agg.checks.push_back({"f <= k along sampled geodesics", ok, -worst});
    if (!ok && first_failure.empty()) first_failure = "failed: f <= k to the future";
  }

  agg.checks.push_back(
      {"TCD(lambda, N) on the sampled box", report.tcd.satisfied, report.tcd.worst_margin});
  if (!report.tcd.satisfied && first_failure.empty()) {
    first_failure = "failed: sampled TCD(lambda, N) check";
  }

  // Per-point focusing bounds, reachability checks, and worst-case
  // comparison runs; points are independent and may run in parallel.
  std::vector<std::string> point_failures(ys.size());
  parallel_for(ys.size(), opts.exec, [&](std::size_t j) {
    PointVerdict& pv = report.points[j];
    FocusingVerdict& v = pv.verdict;
    const bool strict_ok = v.checks.front().pass;
    if (!strict_ok) return;
    const double delta = pv.delta;

    switch (theorem) {
      case TheoremId::t1_4: {
        const TpResult tp = tp_nonneg(profiles[j], n, delta);
        v.checks.push_back({"reparametrized time reaches the focusing target", tp.applicable,
                            tp.applicable ? tp.value : 0.0});
        if (tp.applicable) {
          v.t_p = tp.value;
        } else {
          point_failures[j] = plan.needs_completeness
                                  ? "failed: future f-completeness (" + tp.reason + ")"
                                  : "failed: " + tp.reason;
        }
        break;
      }
      case TheoremId::t1_6a: {
        const TpResult tp = tp_desitter_finite_N(n, opts.N.value(), delta);
        v.checks.push_back(
            {"arctanh argument below 1", tp.applicable, tp.applicable ? tp.value : 0.0});
        if (tp.applicable) {
          v.t_p = tp.value;
        } else {
          point_failures[j] = "inapplicable: " + tp.reason;
        }
        break;
      }
      case TheoremId::t1_6b:
      case TheoremId::t1_7: {
        v.t_p = tp_desitter_conformal(delta);
        if (plan.needs_completeness) {
          const double target_s = *v.t_p * 1.2 + 0.1;
          bool reachable = false;
          double t_reach = 0.0;
          for (double t = 1.0; t <= 1e6; t *= 2.0) {
            if (congruence::s_of_t(profiles[j], n, t) >= target_s) {
              reachable = true;
              t_reach = t;
              break;
            }
          }
          v.checks.push_back({"s reaches the focusing bound", reachable, t_reach});
          if (!reachable) point_failures[j] = "failed: s does not reach the focusing bound";
        }
        break;
      }
    }

    if (!point_failures[j].empty()) {
      v.reason = point_failures[j];
      return;
    }
    v.applicable = true;

    if (!opts.run_comparison || !v.t_p) return;

    // Worst-case comparison congruence: curvature frozen at the assumed
    // lower bound along the geodesic through this base point.
    std::function<double(double)> ric;
    double shift = 0.0;  // s-parameter shift of the bounded route
    switch (theorem) {
      case TheoremId::t1_4:
        ric = [](double) { return 0.0; };
        break;
      case TheoremId::t1_6a:
        ric = [n1](double) { return -n1; };
        break;
      case TheoremId::t1_6b: {
        const auto prof = profiles[j];
        ric = [n1, prof](double t) { return -n1 * std::exp(-4.0 * prof.f(t) / n1); };
        break;
      }
      case TheoremId::t1_7:
        ric = [n1](double) { return -n1; };
        shift = opts.grad_f_future_causal ? profiles[j].f(surface_t) : k_shift;
        break;
    }

    double t_max = opts.horizon;
    if (plan.parameterization == Parameterization::proper_time) {
      t_max = std::min(opts.horizon, *v.t_p * 1.5 + 1.0);
    }
    congruence::CongruenceState init{surface_t, 0.0, pv.x0, 0.0};
    const auto traj = congruence::integrate(init, profiles[j], ric, n, opts.N, t_max);
    v.observed = traj.blowup;
    if (traj.blowup.detected && traj.blowup.t_blowup) {
      const double tb = *traj.blowup.t_blowup;
      if (plan.parameterization == Parameterization::proper_time) {
        v.observed_blowup_param = tb;
      } else {
        v.observed_blowup_param = shifted_s(profiles[j], n, tb, shift);
      }
      v.bound_respected = *v.observed_blowup_param <= *v.t_p + 1e-6;
    } else {
      v.bound_respected = false;
    }
  });

  for (const auto& s : point_failures) {
    if (!s.empty() && first_failure.empty()) first_failure = s;
  }

  // Aggregate: all-points conjunction at the uniform delta.
  bool all_applicable = report.tcd.satisfied;
  bool all_respected = true;
  bool any_comparison = false;
  double tp_agg = 0.0;
  double observed_agg = 0.0;
  for (const auto& pv : report.points) {
    all_applicable = all_applicable && pv.verdict.applicable;
    if (pv.verdict.bound_respected.has_value()) {
      any_comparison = true;
      all_respected = all_respected && *pv.verdict.bound_respected;
      observed_agg = std::max(observed_agg, pv.verdict.observed_blowup_param.value_or(0.0));
    }
    if (pv.verdict.t_p) tp_agg = std::max(tp_agg, *pv.verdict.t_p);
  }
  for (const auto& c : agg.checks) all_applicable = all_applicable && c.pass;

  agg.applicable = all_applicable;
  if (!all_applicable) {
    agg.reason = first_failure.empty() ? "inapplicable" : first_failure;
  }
  if (all_applicable) {
    agg.t_p = tp_agg;
    if (any_comparison) {
      agg.observed_blowup_param = observed_agg;
      agg.bound_respected = all_respected;
    }
  }
  return report;
}

nlohmann::json to_json(const congruence::BlowupRecord& rec) {
  nlohmann::json j;
  j["detected"] = rec.detected;
  if (rec.t_blowup) {
    j["t_blowup"] = *rec.t_blowup;
  } else {
    j["t_blowup"] = nullptr;
  }
  j["x_at_cutoff"] = rec.x_at_cutoff;
  switch (rec.method) {
    case congruence::BlowupRecord::Method::none:
      j["method"] = "none";
      break;
    case congruence::BlowupRecord::Method::threshold_crossing:
      j["method"] = "threshold-crossing";
      break;
    case congruence::BlowupRecord::Method::richardson_extrapolated:
      j["method"] = "richardson-extrapolated";
      break;
  }
  return j;
}

nlohmann::json to_json(const FocusingVerdict& v) {
  nlohmann::json j;
  j["applicable"] = v.applicable;
  j["reason"] = v.reason;
  j["parameterization"] =
      v.parameterization == Parameterization::proper_time ? "proper-time" : "s-parameter";
  if (v.t_p) {
    j["t_p_predicted"] = *v.t_p;
  } else {
    j["t_p_predicted"] = nullptr;
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
  }
  j["hypothesis_checks"] = checks;
  if (v.observed) j["observed_blowup"] = to_json(*v.observed);
  if (v.observed_blowup_param) j["observed_blowup_param"] = *v.observed_blowup_param;
  if (v.bound_respected.has_value()) j["bound_respected"] = *v.bound_respected;
  return j;
}

nlohmann::json to_json(const geometry::TcdReport& r) {
  nlohmann::json j;
  j["satisfied"] = r.satisfied;
  j["worst_margin"] = r.worst_margin;
  j["worst_point"] = {{"t", r.worst_t}, {"y", r.worst_y}, {"chi", r.worst_chi}};
  j["null_limit_ok"] = r.null_limit_ok;
  j["null_worst_coeff"] = r.null_worst_coeff;
  j["tolerance"] = r.tolerance;
  j["N"] = r.N_str;
  j["lambda"] = r.lambda_text;
  j["note"] = r.note;
  return j;
}

nlohmann::json to_json(const TheoremReport& r) {
  nlohmann::json j;
  j["theorem"] = theorem_name(r.theorem);
  j["tcd"] = to_json(r.tcd);
  j["delta_uniform"] = r.delta_uniform;
  j["aggregate"] = to_json(r.aggregate);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"y", p.y}, {"x0", p.x0}, {"delta", p.delta}, {"verdict", to_json(p.verdict)}});
  }
  j["points"] = pts;
  return j;
}

}  // namespace bem::focusing
