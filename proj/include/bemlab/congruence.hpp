#ifndef BEMLAB_CONGRUENCE_HPP_
#define BEMLAB_CONGRUENCE_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bemlab/geometry.hpp"
#include "bemlab/synthetic_dimension.hpp"

namespace bem::congruence {

// A statement that f' is nondecreasing with f'(from_t) > 0 for t >= from_t.
// It yields a closed upper bound on the tail of the reparametrization
// integral: for T >= from_t,
//   int_T^inf e^{-2f/(n-1)} dt <= e^{-2f(T)/(n-1)} (n-1)/(2 f'(T)).
struct DecayCertificate {
  double from_t = 0.0;
};

enum class Provenance { analytic, from_model };

struct ProfileOptions {
  double probe_to = 10.0;  // interval over which the derivative triple is cross-checked
  std::optional<DecayCertificate> decay;
  bool skip_consistency_check = false;
};

// The weight function restricted to a timelike geodesic: t -> (f, f', f'').
// Construction cross-checks the derivative triple by finite differences.
class FProfile {
 public:
  using Fn = std::function<double(double)>;

  static FProfile analytic(Fn f, Fn f1, Fn f2, const ProfileOptions& opts = {});
  static FProfile zero();
  static FProfile constant(double k);
  // Restriction of the model weight to the t-line through fiber point y0.
  static FProfile from_model(const geometry::SpacetimeModel& model, double y0,
                             const ProfileOptions& opts = {});

  double f(double t) const { return f_(t); }
  double f1(double t) const { return f1_(t); }
  double f2(double t) const { return f2_(t); }
  Provenance provenance() const { return provenance_; }
  const std::optional<DecayCertificate>& decay() const { return decay_; }

 private:
  FProfile() = default;
  Fn f_, f1_, f2_;
  Provenance provenance_ = Provenance::analytic;
  std::optional<DecayCertificate> decay_;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Reparametrized time s(t) = int_0^t e^{-2 f(tau)/(n-1)} dtau by adaptive
// Gauss-Kronrod quadrature, absolute error <= 1e-10.
double s_of_t(const FProfile& profile, int n, double t);
QuadratureResult s_of_t_checked(const FProfile& profile, int n, double t);

// Certified bracket of s(inf) obtained from the decay certificate.
struct SBound {
  double lower = 0.0;
  double upper = 0.0;
  double t_used = 0.0;
};
std::optional<SBound> s_infinity_bound(const FProfile& profile, int n);

enum class Completeness { complete_up_to_horizon, incomplete_certified, undetermined };

struct CompletenessReport {
  Completeness verdict = Completeness::undetermined;
  double s_at_horizon = 0.0;
  std::optional<SBound> s_infinity;
  std::string detail;
};

// Numerics cannot certify surjectivity of s onto [0, inf); the report
// distinguishes "s reached the threshold by the horizon" from "a tail
// bound proves s(inf) finite" and says so in `detail`.
CompletenessReport is_future_f_complete(const FProfile& profile, int n, double horizon,
                                        double threshold);

struct CongruenceState {
  double t = 0.0;         // proper time
  double s = 0.0;         // reparametrized time
  double x = 0.0;         // normalized weighted mean curvature H_f/(n-1)
  double shear_sq = 0.0;  // |sigma|^2 >= 0
};

// Right-hand side of the scalar focusing equation
//   x' = -(ric + |sigma|^2)/(n-1) - x^2 - 2 x f'/(n-1) - q_N f'^2,
// with q_N the synthetic-dimension coefficient (limit value in the
// infinite regime).
double raychaudhuri_rhs(const CongruenceState& state, double ric_along, const FProfile& profile,
                        int n, const SyntheticDimension& N);

struct BlowupRecord {
  enum class Method { none, threshold_crossing, richardson_extrapolated };
  bool detected = false;
  std::optional<double> t_blowup;
  double x_at_cutoff = 0.0;
  Method method = Method::none;
};

struct IntegrateOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::function<double(double)> shear_sq;  // |sigma|^2 as a function of t; default 0
  double x_switch = 1e6;                   // |x| beyond which divergence handling arms
  double step_floor = 1e-12;               // step collapse threshold
  double record_x_cap = 1e6;               // states with |x| beyond this are not recorded
};

struct Trajectory {
  std::vector<CongruenceState> states;
  BlowupRecord blowup;
};

// Adaptive embedded Runge-Kutta integration of the focusing equation with
// divergence detection: once |x| exceeds x_switch and the step has
// collapsed, integration continues in the reciprocal variable w = 1/x,
// which is regular at the blow-up, and t_blowup is reported as the root
// of w with step-halving Richardson refinement.
Trajectory integrate(const CongruenceState& initial, const FProfile& profile,
                     const std::function<double(double)>& ric_along, int n,
                     const SyntheticDimension& N, double t_max, const IntegrateOptions& opts = {});

// CSV export: header t,s,x,H_f,shear_sq,f,f_prime; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const FProfile& profile,
                          int n);

}  // namespace bem::congruence

#endif  // BEMLAB_CONGRUENCE_HPP_
