#include "bemlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bem::geometry {

namespace {

bool finite(double x) { return std::isfinite(x); }

double fiber_unit_ricci(const Fiber& fiber, int n) {
  // Ric_h along a unit fiber direction: (n-2) * curvature on a
  // constant-curvature fiber, otherwise the supplied lower bound.
  if (const auto* c = std::get_if<ConstantCurvatureFiber>(&fiber)) {
    return static_cast<double>(n - 2) * c->curvature;
  }
  return std::get<RicciBoundFiber>(fiber).ricci_lower;
}

D2 eval_warp(const WarpedModel& m, double t) {
  if (!m.t_domain.contains(t)) {
    throw std::domain_error("t outside the model domain");
  }
  const D2 a = m.warp(t);
  if (!finite(a.v) || !finite(a.d1) || !finite(a.d2)) {
    throw std::domain_error("warp derivatives unavailable at the query point");
  }
  if (a.v <= 0.0) throw std::domain_error("warp function must be positive");
  return a;
}

D2 eval_weight(const WarpedModel& m, double t) {
  const D2 f = m.weight ? m.weight(t) : D2{0, 0, 0};
  if (!finite(f.v) || !finite(f.d1) || !finite(f.d2)) {
    throw std::domain_error("weight derivatives unavailable at the query point");
  }
  return f;
}

struct WarpedFrameCoeffs {
  double A = 0.0;  // Ric^N_f(d_t, d_t)
  double C = 0.0;  // Ric^N_f(E, E), E a unit fiber direction
};

WarpedFrameCoeffs warped_coeffs(const WarpedModel& m, const SyntheticDimension& N, double t) {
  require_admissible(N, m.n);
  const D2 a = eval_warp(m, t);
  const D2 f = eval_weight(m, t);
  const double n1 = static_cast<double>(m.n - 1);
  const double hub = a.d1 / a.v;
  const double acc = a.d2 / a.v;
  WarpedFrameCoeffs out;
  out.A = -n1 * acc + f.d2 - f.d1 * f.d1 * N.one_over_N_minus_n(m.n);
  out.C = acc + static_cast<double>(m.n - 2) * hub * hub +
          fiber_unit_ricci(m.fiber, m.n) / (a.v * a.v) - hub * f.d1;
  return out;
}

// Finite-difference curvature of a twisted model. The metric is diagonal,
// diag(-1, a^2, ..., a^2), and depends on the first two coordinates only.
class TwistedEval {
 public:
  TwistedEval(const TwistedModel& m) : m_(m), h_(m.fd_step), n_(m.n) {
    if (h_ <= 0.0) throw std::domain_error("fd_step must be positive");
    if (n_ < 2) throw std::domain_error("spacetime dimension must be at least 2");
  }

  void require_interior(double t, double y) const {
    const double margin = 4.0 * h_;
    if (t < m_.t_domain.lo + margin || t > m_.t_domain.hi - margin || y < m_.y_domain.lo + margin ||
        y > m_.y_domain.hi - margin) {
      throw std::domain_error("query too near the domain boundary for the stencil");
    }
  }

  double a(double t, double y) const {
    const double v = m_.warp(t, y).v;
    if (!finite(v)) throw std::domain_error("warp unavailable at the query point");
    if (v <= 0.0) throw std::domain_error("warp function must be positive");
    return v;
  }

  double f(double t, double y) const {
    const double v = m_.weight ? m_.weight(t, y).v : 0.0;
    if (!finite(v)) throw std::domain_error("weight unavailable at the query point");
    return v;
  }

  // g_{alpha alpha}
  double comp(int alpha, double t, double y) const {
    if (alpha == 0) return -1.0;
    const double av = a(t, y);
    return av * av;
  }

  // fourth-order centered first derivative along dir (0: t, 1: y)
  template <class F>
  double d1(F&& g, int dir, double t, double y) const {
    const double dt = dir == 0 ? h_ : 0.0;
    const double dy = dir == 1 ? h_ : 0.0;
    return (-g(t + 2 * dt, y + 2 * dy) + 8.0 * g(t + dt, y + dy) - 8.0 * g(t - dt, y - dy) +
            g(t - 2 * dt, y - 2 * dy)) /
           (12.0 * h_);
  }

  // second-order centered second derivative along dir
  template <class F>
  double d2(F&& g, int dir, double t, double y) const {
    const double dt = dir == 0 ? h_ : 0.0;
    const double dy = dir == 1 ? h_ : 0.0;
    return (g(t + dt, y + dy) - 2.0 * g(t, y) + g(t - dt, y - dy)) / (h_ * h_);
  }

  // second-order mixed derivative d^2/dtdy
  template <class F>
  double cross(F&& g, double t, double y) const {
    return (g(t + h_, y + h_) - g(t + h_, y - h_) - g(t - h_, y + h_) + g(t - h_, y - h_)) /
           (4.0 * h_ * h_);
  }

  double dcomp(int alpha, int dir, double t, double y) const {
    if (alpha == 0) return 0.0;
    return d1([this, alpha](double tt, double yy) { return comp(alpha, tt, yy); }, dir, t, y);
  }

  // Christoffel symbols of a diagonal metric; index layout [a][m][n].
  std::vector<double> christoffel(double t, double y) const {
    std::vector<double> gamma(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
    const auto at = [&](int a, int mm, int nn) -> double& {
      return gamma[(static_cast<std::size_t>(a) * n_ + mm) * n_ + nn];
    };
    // Only derivatives along coordinates 0 and 1 are nonzero, and only
    // components >= 1 vary. Precompute dG_i/dt and dG_i/dy; by symmetry
    // all spatial components share the same value.
    const double dG_dt = dcomp(1, 0, t, y);
    const double dG_dy = dcomp(1, 1, t, y);
    const double G1 = comp(1, t, y);
    const double inv_G1 = 1.0 / G1;
    for (int i = 1; i < n_; ++i) {
      // Gamma^0_{ii} = +1/2 dG_i/dt   (g^{00} = -1 and -d_0 g_ii term)
      at(0, i, i) = 0.5 * dG_dt;
      // Gamma^i_{0i} = 1/2 g^{ii} d_t g_ii
      at(i, 0, i) = at(i, i, 0) = 0.5 * inv_G1 * dG_dt;
      // Gamma^i_{1i} = 1/2 g^{ii} d_y g_ii (i != 1), and Gamma^1_{ii} = -1/2 g^{11} d_y g_ii
      if (i != 1) {
        at(i, 1, i) = at(i, i, 1) = 0.5 * inv_G1 * dG_dy;
        at(1, i, i) = -0.5 * inv_G1 * dG_dy;
      }
    }
    // Gamma^1_{11} = 1/2 g^{11} d_y g_11
    at(1, 1, 1) = 0.5 * inv_G1 * dG_dy;
    return gamma;
  }

  // Ric_{mu nu} = d_a Gamma^a_{mu nu} - d_nu Gamma^a_{mu a}
  //              + Gamma^a_{a b} Gamma^b_{mu nu} - Gamma^a_{nu b} Gamma^b_{mu a},
  // with the Gamma-derivatives taken by second-order centered differences.
  double ricci(int mu, int nu, double t, double y) const {
    const auto g0 = christoffel(t, y);
    const auto gtp = christoffel(t + h_, y);
    const auto gtm = christoffel(t - h_, y);
    const auto gyp = christoffel(t, y + h_);
    const auto gym = christoffel(t, y - h_);
    const auto at = [&](const std::vector<double>& g, int a, int mm, int nn) {
      return g[(static_cast<std::size_t>(a) * n_ + mm) * n_ + nn];
    };
    const auto dgamma = [&](int dir, int a, int mm, int nn) {
      const auto& gp = dir == 0 ? gtp : gyp;
      const auto& gm = dir == 0 ? gtm : gym;
      return (at(gp, a, mm, nn) - at(gm, a, mm, nn)) / (2.0 * h_);
    };
    double r = 0.0;
    for (int a = 0; a < 2; ++a) r += dgamma(a, a, mu, nu);
    if (nu < 2) {
      for (int a = 0; a < n_; ++a) r -= dgamma(nu, a, mu, a);
    }
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        r += at(g0, a, a, b) * at(g0, b, mu, nu);
        r -= at(g0, a, nu, b) * at(g0, b, mu, a);
      }
    }
    return r;
  }

  double f_d1(int dir, double t, double y) const {
    return d1([this](double tt, double yy) { return f(tt, yy); }, dir, t, y);
  }

  // Hess f(d_mu, d_nu) with finite-difference second derivatives; f has
  // no dependence on coordinates >= 2, but the connection still
  // contributes there.
  double hess_f(int mu, int nu, const std::vector<double>& gamma, double t, double y) const {
    const auto fv = [this](double tt, double yy) { return f(tt, yy); };
    double second = 0.0;
    if (mu < 2 && nu < 2) {
      if (mu == nu) {
        second = d2(fv, mu, t, y);
      } else {
        second = cross(fv, t, y);
      }
    }
    const auto at = [&](int a, int mm, int nn) {
      return gamma[(static_cast<std::size_t>(a) * n_ + mm) * n_ + nn];
    };
    double connection = 0.0;
    for (int a = 0; a < 2; ++a) connection += at(a, mu, nu) * f_d1(a, t, y);
    return second - connection;
  }

  // Ric^N_f(d_mu, d_nu) in coordinate slots.
  double ric_nf(int mu, int nu, const SyntheticDimension& N, double t, double y) const {
    require_admissible(N, n_);
    require_interior(t, y);
    const auto gamma = christoffel(t, y);
    const double fmu = mu < 2 ? f_d1(mu, t, y) : 0.0;
    const double fnu = nu < 2 ? f_d1(nu, t, y) : 0.0;
    return ricci(mu, nu, t, y) + hess_f(mu, nu, gamma, t, y) -
           fmu * fnu * N.one_over_N_minus_n(n_);
  }

 private:
  const TwistedModel& m_;
  double h_;
  int n_;
};

struct TwistedFrameCoeffs {
  double A = 0.0;   // Ric^N_f(d_t, d_t)
  double B = 0.0;   // Ric^N_f(d_t, e_y), e_y the unit fiber-coordinate direction
  double C1 = 0.0;  // Ric^N_f(e_y, e_y)
  double C2 = 0.0;  // Ric^N_f(e_perp, e_perp), zero-filled when n = 2
};

TwistedFrameCoeffs twisted_coeffs(const TwistedModel& m, const SyntheticDimension& N, double t,
                                  double y) {
  TwistedEval ev(m);
  const double av = ev.a(t, y);
  TwistedFrameCoeffs out;
  out.A = ev.ric_nf(0, 0, N, t, y);
  out.B = ev.ric_nf(0, 1, N, t, y) / av;
  out.C1 = ev.ric_nf(1, 1, N, t, y) / (av * av);
  out.C2 = m.n >= 3 ? ev.ric_nf(2, 2, N, t, y) / (av * av) : 0.0;
  return out;
}

void check_unit_timelike(const FrameVector& X) {
  const double norm = -X.u_t * X.u_t + X.u_y * X.u_y + X.u_perp * X.u_perp;
  if (std::abs(norm + 1.0) > 1e-9) {
    throw std::domain_error("frame vector is not unit timelike");
  }
}

}  // namespace

SmoothFn1 constant_fn(double c) {
  return [c](double) { return D2{c, 0.0, 0.0}; };
}

int dimension(const SpacetimeModel& model) {
  return std::visit([](const auto& m) { return m.n; }, model);
}

TwistedModel conformal_twisted(int n, SmoothFn2 weight, Interval t_dom, Interval y_dom,
                               double fd_step) {
  TwistedModel m;
  m.n = n;
  m.weight = weight;
  const double inv = 1.0 / static_cast<double>(n - 1);
  m.warp = [weight, inv](double t, double y) { return exp(inv * weight(t, y)); };
  m.t_domain = t_dom;
  m.y_domain = y_dom;
  m.fd_step = fd_step;
  return m;
}

double ric_time_time(const SpacetimeModel& model, const SyntheticDimension& N, double t, double y) {
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    return warped_coeffs(*w, N, t).A;
  }
  const auto& tw = std::get<TwistedModel>(model);
  return TwistedEval(tw).ric_nf(0, 0, N, t, y);
}

double ric_general(const SpacetimeModel& model, const SyntheticDimension& N, const FrameVector& X,
                   double t, double y) {
  check_unit_timelike(X);
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    const auto c = warped_coeffs(*w, N, t);
    return X.u_t * X.u_t * c.A + (X.u_y * X.u_y + X.u_perp * X.u_perp) * c.C;
  }
  const auto& tw = std::get<TwistedModel>(model);
  if (tw.n == 2 && X.u_perp != 0.0) {
    throw std::domain_error("no perpendicular fiber direction exists for n = 2");
  }
  const auto c = twisted_coeffs(tw, N, t, y);
  // Components Ric^N_f(d_t, e_perp) and Ric^N_f(e_y, e_perp) vanish by the
  // reflection symmetry of the flat perpendicular directions.
  return X.u_t * X.u_t * c.A + 2.0 * X.u_t * X.u_y * c.B + X.u_y * X.u_y * c.C1 +
         X.u_perp * X.u_perp * c.C2;
}

double ric_mixed(const SpacetimeModel& model, const SyntheticDimension& N, double t, double y) {
  const auto* tw = std::get_if<TwistedModel>(&model);
  if (!tw) throw std::domain_error("mixed-slot evaluator requires a twisted model");
  return TwistedEval(*tw).ric_nf(0, 1, N, t, y);
}

SliceCurvature slice_mean_curvatures(const SpacetimeModel& model, double t, double y) {
  SliceCurvature out;
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    const D2 a = eval_warp(*w, t);
    const D2 f = eval_weight(*w, t);
    out.H = static_cast<double>(w->n - 1) * a.d1 / a.v;
    out.H_f = out.H - f.d1;
    return out;
  }
  const auto& tw = std::get<TwistedModel>(model);
  const Jet2 a = tw.warp(t, y);
  if (!finite(a.v) || a.v <= 0.0) throw std::domain_error("warp function must be positive");
  const Jet2 f = tw.weight ? tw.weight(t, y) : Jet2{};
  out.H = static_cast<double>(tw.n - 1) * a.dt / a.v;
  out.H_f = out.H - f.dt;
  return out;
}

namespace {

// One grid point of the TCD scan: minimum over sampled rapidities of
// Ric^N_f(X,X) - lambda plus the analytic boost-to-null coefficients.
TcdSample tcd_point(const SpacetimeModel& model, const SyntheticDimension& N,
                    const LambdaFn& lambda, const GridSpec& grid, double t, double y,
                    double null_tolerance) {
  double A = 0.0, B = 0.0, C1 = 0.0, C2 = 0.0;
  bool has_perp = false;
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    const auto c = warped_coeffs(*w, N, t);
    A = c.A;
    B = 0.0;
    C1 = C2 = c.C;
    has_perp = false;  // all fiber directions are equivalent
  } else {
    const auto& tw = std::get<TwistedModel>(model);
    const auto c = twisted_coeffs(tw, N, t, y);
    A = c.A;
    B = c.B;
    C1 = c.C1;
    C2 = c.C2;
    has_perp = tw.n >= 3;
  }
  const double lam = lambda ? lambda(t, y) : 0.0;

  TcdSample out;
  out.margin = std::numeric_limits<double>::infinity();
  out.chi = 0.0;
  const auto consider = [&](double q, double chi) {
    const double margin = q - lam;
    if (margin < out.margin) {
      out.margin = margin;
      out.chi = chi;
    }
  };

  const int kc = std::max(grid.chi_count, 2);
  for (int k = 0; k < kc; ++k) {
    const double chi = -grid.chi_max + 2.0 * grid.chi_max * k / (kc - 1);
    const double ch = std::cosh(chi), sh = std::sinh(chi);
    consider(A * ch * ch + 2.0 * B * ch * sh + C1 * sh * sh, chi);
    if (has_perp) consider(A * ch * ch + C2 * sh * sh, chi);
  }

  // Boost-to-null coefficients: Q(chi) grows like e^{2|chi|}/4 times
  // A + C +- 2B. A negative coefficient drives Q to -infinity; a vanishing
  // one leaves the finite limit (A - C)/2.
  double null_min = std::numeric_limits<double>::infinity();
  const auto consider_null = [&](double coeff, double C) {
    null_min = std::min(null_min, coeff);
    if (std::abs(coeff) <= null_tolerance) {
      consider((A - C) / 2.0, std::numeric_limits<double>::infinity());
    }
  };
  consider_null(A + C1 + 2.0 * B, C1);
  consider_null(A + C1 - 2.0 * B, C1);
  if (has_perp) consider_null(A + C2, C2);
  out.null_coeff_min = null_min;
  return out;
}

template <class Range>
void tcd_scan_impl(const SpacetimeModel& model, const SyntheticDimension& N,
                   const LambdaFn& lambda, const GridSpec& grid, std::vector<TcdSample>& out,
                   double null_tolerance, Range&& run) {
  const int nt = std::max(grid.t_count, 1);
  const int ny = std::max(grid.y_count, 1);
  out.assign(static_cast<std::size_t>(nt) * ny, TcdSample{});
  run(static_cast<std::size_t>(nt) * ny, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / ny;
    const int j = static_cast<int>(idx) % ny;
    const double t = nt == 1 ? grid.t_min : grid.t_min + (grid.t_max - grid.t_min) * i / (nt - 1);
    const double y = ny == 1 ? grid.y_min : grid.y_min + (grid.y_max - grid.y_min) * j / (ny - 1);
    out[idx] = tcd_point(model, N, lambda, grid, t, y, null_tolerance);
  });
}

}  // namespace

void tcd_scan_serial(const SpacetimeModel& model, const SyntheticDimension& N,
                     const LambdaFn& lambda, const GridSpec& grid, std::vector<TcdSample>& out,
                     double null_tolerance) {
  tcd_scan_impl(model, N, lambda, grid, out, null_tolerance,
                [](std::size_t count, auto&& fn) { parallel_for(count, Exec::serial, fn); });
}

void tcd_scan_omp(const SpacetimeModel& model, const SyntheticDimension& N, const LambdaFn& lambda,
                  const GridSpec& grid, std::vector<TcdSample>& out, double null_tolerance) {
  tcd_scan_impl(model, N, lambda, grid, out, null_tolerance,
                [](std::size_t count, auto&& fn) { parallel_for(count, Exec::parallel, fn); });
}

TcdReport check_tcd(const SpacetimeModel& model, const SyntheticDimension& N,
                    const LambdaFn& lambda, const GridSpec& grid, const TcdOptions& opts) {
  require_admissible(N, dimension(model));
  std::vector<TcdSample> samples;
  if (opts.exec == Exec::parallel) {
    tcd_scan_omp(model, N, lambda, grid, samples, opts.tolerance);
  } else {
    tcd_scan_serial(model, N, lambda, grid, samples, opts.tolerance);
  }

  const int nt = std::max(grid.t_count, 1);
  const int ny = std::max(grid.y_count, 1);
  TcdReport report;
  report.tolerance = opts.tolerance;
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.null_worst_coeff = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const auto& s = samples[idx];
    if (s.margin < report.worst_margin) {
      report.worst_margin = s.margin;
      const int i = static_cast<int>(idx) / ny;
      const int j = static_cast<int>(idx) % ny;
      report.worst_t = nt == 1 ? grid.t_min : grid.t_min + (grid.t_max - grid.t_min) * i / (nt - 1);
      report.worst_y = ny == 1 ? grid.y_min : grid.y_min + (grid.y_max - grid.y_min) * j / (ny - 1);
      report.worst_chi = s.chi;
    }
    report.null_worst_coeff = std::min(report.null_worst_coeff, s.null_coeff_min);
  }
  report.null_limit_ok = report.null_worst_coeff >= -opts.tolerance;
  report.satisfied = report.null_limit_ok && report.worst_margin >= -opts.tolerance;
  report.N_str = N.str();
  report.note =
      "sampling-based certificate: the condition was checked on the sampled grid of unit "
      "timelike vectors and on the analytic boost-to-null limits, not proven";
  return report;
}

double fiber_curvature_threshold(int n, const SmoothFn1& weight, const SyntheticDimension& N,
                                 const GridSpec& grid, double lo, double hi, double tol,
                                 const TcdOptions& opts) {
  const auto satisfied = [&](double curv) {
    WarpedModel m;
    m.n = n;
    m.weight = weight;
    const double inv = 1.0 / static_cast<double>(n - 1);
    m.warp = [weight, inv](double t) {
      const D2 f = weight(t);
      const double av = std::exp(inv * f.v);
      return D2{av, av * inv * f.d1, av * (inv * inv * f.d1 * f.d1 + inv * f.d2)};
    };
    m.fiber = ConstantCurvatureFiber{curv};
    return check_tcd(m, N, nullptr, grid, opts).satisfied;
  };
  if (satisfied(lo) || !satisfied(hi)) {
    throw std::invalid_argument("bisection bracket does not straddle the threshold");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double cauchy_schwarz_gap(double H, double f_prime, int n, double N_value) {
  if (N_value <= static_cast<double>(n)) {
    throw std::domain_error("the quadratic-form inequality requires N > n");
  }
  const double n1 = static_cast<double>(n - 1);
  const double Hf = H - f_prime;
  return H * H / n1 + f_prime * f_prime / (N_value - static_cast<double>(n)) -
         Hf * Hf / (N_value - 1.0);
}

}  // namespace bem::geometry
