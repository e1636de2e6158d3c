#ifndef BEMLAB_FOCUSING_HPP_
#define BEMLAB_FOCUSING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bemlab/congruence.hpp"
#include "bemlab/geometry.hpp"

namespace bem::focusing {

// Curvature regimes of the focusing bounds, named by the lower bound
// lambda they assume for Ric^N_f along the congruence.
enum class Regime {
  nonneg_tcd,          // lambda = 0
  desitter_conformal,  // lambda = -(n-1) e^{-4f/(n-1)}
  desitter_constant,   // lambda = -(n-1)
  desitter_N,          // lambda = -(N-1), N > n
};

std::string regime_name(Regime r);

struct FocusingHypotheses {
  Regime regime = Regime::nonneg_tcd;
  int n = 4;
  SyntheticDimension N = SyntheticDimension::infinite();
  double delta = 1.0;  // margin in the initial-condition inequality
  double f0 = 0.0;     // f at the base point
  std::optional<double> k;  // uniform upper bound of f to the future
  std::optional<double> B;  // inf of f over the initial surface
  bool grad_f_future_causal = false;
};

enum class Parameterization { proper_time, s_parameter };

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
};

struct FocusingVerdict {
  bool applicable = false;
  std::string reason;  // first failed hypothesis when inapplicable
  std::optional<double> t_p;
  Parameterization parameterization = Parameterization::proper_time;
  std::vector<HypothesisCheck> checks;
  std::optional<congruence::BlowupRecord> observed;
  std::optional<double> observed_blowup_param;  // blow-up mapped into the bound's parameter
  std::optional<bool> bound_respected;
};

struct TpResult {
  bool applicable = false;
  double value = 0.0;
  std::string reason;
};

// Proper-time bound for the nonnegative regime: the unique t with
// s(t) = e^{-2 f(0)/(n-1)} / delta, by bracketing plus safeguarded
// Newton on s(t) to 1e-10. Inapplicable when s saturates below the
// target (certified by the profile's tail bound).
TpResult tp_nonneg(const congruence::FProfile& profile, int n, double delta,
                   double bracket_cap = 1e6);

// Proper-time bound (N-1)/delta for finite N > n.
double tp_finite_N(int n, double N_value, double delta);

// Bound arctanh(1/(1+delta)) in the reparametrized s-variable.
double tp_desitter_conformal(double delta);

// Proper-time bound arctanh((N-1)/((n-1)(1+delta))) for N > n;
// inapplicable when the arctanh argument reaches 1.
TpResult tp_desitter_finite_N(int n, double N_value, double delta);

// Constant-lower-bound reduction: shift f by its upper bound k (or use
// the future-causal-gradient route), check the strengthened initial
// condition threshold, and delegate to the conformal bound. The result
// lives in the s-parameter of the shifted weight.
FocusingVerdict corollary_bounds(const FocusingHypotheses& hyp);

// Threshold on x(0) demanded by the corollary reduction.
double corollary_threshold(const FocusingHypotheses& hyp);

enum class TheoremId { t1_4, t1_6a, t1_6b, t1_7 };

std::string theorem_name(TheoremId id);

struct TheoremOptions {
  SyntheticDimension N = SyntheticDimension::infinite();
  geometry::GridSpec grid;       // slice sampling plus TCD scan box
  double tolerance = 1e-9;
  double horizon = 50.0;         // proper-time search horizon
  std::optional<double> k;       // sup of f to the future (bounded route)
  bool grad_f_future_causal = false;
  bool run_comparison = true;    // integrate the worst-case comparison ODE
  std::optional<congruence::DecayCertificate> profile_decay;
  Exec exec = Exec::parallel;
};

struct PointVerdict {
  double y = 0.0;
  double x0 = 0.0;
  double delta = 0.0;
  FocusingVerdict verdict;
};

struct TheoremReport {
  TheoremId theorem = TheoremId::t1_4;
  geometry::TcdReport tcd;
  std::vector<PointVerdict> points;
  double delta_uniform = 0.0;  // min over sampled points
  FocusingVerdict aggregate;
};

// Checks a singularity-criterion preset against a model slice: evaluates
// the weighted mean curvature at sampled base points, verifies the
// strictness and curvature hypotheses, and integrates the worst-case
// comparison congruence (Ric^N_f frozen at the assumed lower bound)
// against the predicted focusing time.
TheoremReport theorem_checker(const geometry::SpacetimeModel& model, TheoremId theorem,
                              double surface_t, const TheoremOptions& opts);

nlohmann::json to_json(const congruence::BlowupRecord& rec);
nlohmann::json to_json(const FocusingVerdict& v);
nlohmann::json to_json(const TheoremReport& r);
nlohmann::json to_json(const geometry::TcdReport& r);

}  // namespace bem::focusing

#endif  // BEMLAB_FOCUSING_HPP_
