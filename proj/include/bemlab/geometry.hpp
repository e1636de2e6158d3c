#ifndef BEMLAB_GEOMETRY_HPP_
#define BEMLAB_GEOMETRY_HPP_

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bemlab/jet.hpp"
#include "bemlab/parallel.hpp"
#include "bemlab/synthetic_dimension.hpp"

namespace bem::geometry {

// Value of a univariate smooth function along with its first two derivatives.
struct D2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using SmoothFn1 = std::function<D2(double)>;        // t -> (f, f', f'')
using SmoothFn2 = std::function<Jet2(double, double)>;  // (t, y) -> 2-jet

SmoothFn1 constant_fn(double c);

struct ConstantCurvatureFiber {
  double curvature = 0.0;  // sectional curvature of the (n-1)-fiber
};

struct RicciBoundFiber {
  double ricci_lower = 0.0;  // lower bound of Ric_h along unit fiber directions
};

using Fiber = std::variant<ConstantCurvatureFiber, RicciBoundFiber>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Metric -dt^2 + a(t)^2 h with a homogeneous fiber and a temporal weight
// f(t) = psi(t). All curvature contractions are exact closed forms.
struct WarpedModel {
  int n = 4;
  SmoothFn1 warp;                      // a(t) > 0
  Fiber fiber = ConstantCurvatureFiber{0.0};
  SmoothFn1 weight;                    // psi(t)
  Interval t_domain{-1e9, 1e9};
};

// Metric -dt^2 + a(t, y)^2 delta on a flat-torus fiber whose first
// coordinate is y; the weight f(t, y) may couple t and y. Curvature is
// evaluated by a finite-difference Christoffel/Ricci pipeline with step
// fd_step (first derivatives fourth order, second derivatives second
// order), so results converge at second order in fd_step.
struct TwistedModel {
  int n = 4;
  SmoothFn2 warp;                      // a(t, y) > 0
  SmoothFn2 weight;                    // f(t, y)
  Interval t_domain{-10.0, 10.0};
  Interval y_domain{-10.0, 10.0};
  double fd_step = 1e-3;
};

using SpacetimeModel = std::variant<WarpedModel, TwistedModel>;

int dimension(const SpacetimeModel& model);

// Conformal family -dt^2 + e^{2 f(t,y)/(n-1)} delta: the twisted metric
// whose slices have vanishing weighted mean curvature.
TwistedModel conformal_twisted(int n, SmoothFn2 weight, Interval t_dom, Interval y_dom,
                               double fd_step = 1e-3);

// Components of a unit timelike vector in the orthonormal frame
// (d_t, e_y, e_perp), where e_y is the unit vector along the fiber
// coordinate carrying the (t,y)-dependence and e_perp a unit vector
// along any of the remaining fiber directions.
struct FrameVector {
  double u_t = 1.0;
  double u_y = 0.0;
  double u_perp = 0.0;
};

// Ric^N_f(d_t, d_t). Exact for warped models, finite differences for
// twisted ones. Throws std::domain_error when the model is invalid at
// the query point (a <= 0, inadmissible N, stencil outside the domain).
double ric_time_time(const SpacetimeModel& model, const SyntheticDimension& N, double t,
                     double y = 0.0);

// Ric^N_f(X, X) for a unit timelike frame vector X.
double ric_general(const SpacetimeModel& model, const SyntheticDimension& N, const FrameVector& X,
                   double t, double y = 0.0);

// Mixed coordinate-slot component Ric^N_f(d_t, d_y) of a twisted model.
double ric_mixed(const SpacetimeModel& model, const SyntheticDimension& N, double t, double y);

struct SliceCurvature {
  double H = 0.0;    // mean curvature of the t = const slice
  double H_f = 0.0;  // H - f'
};

SliceCurvature slice_mean_curvatures(const SpacetimeModel& model, double t, double y = 0.0);

struct GridSpec {
  double t_min = 0.0, t_max = 1.0;
  int t_count = 17;
  double y_min = 0.0, y_max = 0.0;
  int y_count = 1;
  int chi_count = 17;   // rapidity samples over [-chi_max, chi_max]
  double chi_max = 5.0;
};

using LambdaFn = std::function<double(double, double)>;  // lambda(t, y)

struct TcdOptions {
  double tolerance = 1e-9;
  Exec exec = Exec::parallel;
};

struct TcdReport {
  bool satisfied = false;
  double worst_margin = 0.0;          // min over samples of Ric^N_f(X,X) - lambda
  double worst_t = 0.0, worst_y = 0.0, worst_chi = 0.0;
  bool null_limit_ok = true;          // boost-to-null limits stay bounded below
  double null_worst_coeff = 0.0;      // most negative null coefficient seen
  double tolerance = 1e-9;
  std::string N_str;                  // synthetic-dimension regime checked
  std::string lambda_text = "0";      // textual lower bound when the caller supplies one
  std::string note;                   // sampling disclaimer
};

// Samples Ric^N_f(X,X) - lambda over a (t, y) x rapidity grid of unit
// timelike vectors plus the analytic boost-to-null limits. A positive
// report certifies nothing beyond the sampled set; the note says so.
TcdReport check_tcd(const SpacetimeModel& model, const SyntheticDimension& N,
                    const LambdaFn& lambda, const GridSpec& grid, const TcdOptions& opts = {});

// Per-sample margins of the TCD scan; the two variants are bitwise
// identical, the parallel one fans the grid out over OpenMP threads.
struct TcdSample {
  double margin = 0.0;
  double chi = 0.0;
  double null_coeff_min = 0.0;
};
void tcd_scan_serial(const SpacetimeModel& model, const SyntheticDimension& N,
                     const LambdaFn& lambda, const GridSpec& grid, std::vector<TcdSample>& out,
                     double null_tolerance = 1e-9);
void tcd_scan_omp(const SpacetimeModel& model, const SyntheticDimension& N,
                  const LambdaFn& lambda, const GridSpec& grid, std::vector<TcdSample>& out,
                  double null_tolerance = 1e-9);

// Least fiber curvature for which the conformal sphere model
// -dt^2 + e^{2 psi(t)/(n-1)} g_{S^{n-1}(curv)} passes the sampled
// TCD(0, N) check, located by bisection to `tol`.
double fiber_curvature_threshold(int n, const SmoothFn1& weight, const SyntheticDimension& N,
                                 const GridSpec& grid, double lo, double hi, double tol,
                                 const TcdOptions& opts = {});

// Gap in the quadratic-form inequality
//   H^2/(n-1) + f'^2/(N-n) >= (H - f')^2/(N-1)   (N > n),
// which vanishes exactly when H = -(n-1) f'/(N-n).
double cauchy_schwarz_gap(double H, double f_prime, int n, double N_value);

}  // namespace bem::geometry

#endif  // BEMLAB_GEOMETRY_HPP_
