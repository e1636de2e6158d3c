#include "bemlab/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bem::congruence {

namespace {

void cross_check_derivatives(const FProfile::Fn& f, const FProfile::Fn& f1, const FProfile::Fn& f2,
                             double probe_to) {
  const int samples = 9;
  for (int k = 0; k < samples; ++k) {
    const double t = probe_to * (k + 0.5) / samples;
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    const double fd1 = (f(t + h) - f(t - h)) / (2.0 * h);
    const double fd2 = (f1(t + h) - f1(t - h)) / (2.0 * h);
    const double s1 = std::max(1.0, std::abs(f1(t)));
    const double s2 = std::max(1.0, std::abs(f2(t)));
    if (!std::isfinite(fd1) || std::abs(fd1 - f1(t)) > 1e-6 * s1) {
      throw std::invalid_argument("profile derivative f' is inconsistent with f near t = " +
                                  std::to_string(t));
    }
    if (!std::isfinite(fd2) || std::abs(fd2 - f2(t)) > 1e-6 * s2) {
      throw std::invalid_argument("profile derivative f'' is inconsistent with f' near t = " +
                                  std::to_string(t));
    }
  }
}

void spot_check_certificate(const FProfile::Fn& f1, const FProfile::Fn& f2,
                            const DecayCertificate& cert, double probe_to) {
  if (f1(cert.from_t) <= 0.0) {
    throw std::invalid_argument("decay certificate requires f' > 0 at its starting time");
  }
  const double hi = std::max(cert.from_t + 1.0, probe_to);
  for (int k = 0; k <= 8; ++k) {
    const double t = cert.from_t + (hi - cert.from_t) * k / 8.0;
    if (f2(t) < -1e-9) {
      throw std::invalid_argument("decay certificate requires nondecreasing f' (f'' >= 0)");
    }
  }
}

}  // namespace

FProfile FProfile::analytic(Fn f, Fn f1, Fn f2, const ProfileOptions& opts) {
  if (!f || !f1 || !f2) throw std::invalid_argument("profile requires f, f', f''");
  if (!opts.skip_consistency_check) cross_check_derivatives(f, f1, f2, opts.probe_to);
  if (opts.decay) spot_check_certificate(f1, f2, *opts.decay, opts.probe_to);
  FProfile p;
  p.f_ = std::move(f);
  p.f1_ = std::move(f1);
  p.f2_ = std::move(f2);
  p.provenance_ = Provenance::analytic;
  p.decay_ = opts.decay;
  return p;
}

FProfile FProfile::zero() { return constant(0.0); }

FProfile FProfile::constant(double k) {
  ProfileOptions opts;
  opts.skip_consistency_check = true;
  return analytic([k](double) { return k; }, [](double) { return 0.0; }, [](double) { return 0.0; },
                  opts);
}

FProfile FProfile::from_model(const geometry::SpacetimeModel& model, double y0,
                              const ProfileOptions& opts) {
  auto shared = std::make_shared<geometry::SpacetimeModel>(model);
  Fn f, f1, f2;
  if (const auto* w = std::get_if<geometry::WarpedModel>(shared.get())) {
    if (!w->weight) {
      f = [](double) { return 0.0; };
      f1 = f2 = f;
    } else {
      f = [shared, w](double t) { return w->weight(t).v; };
      f1 = [shared, w](double t) { return w->weight(t).d1; };
      f2 = [shared, w](double t) { return w->weight(t).d2; };
    }
  } else {
    const auto* tw = std::get_if<geometry::TwistedModel>(shared.get());
    if (!tw->weight) {
      f = [](double) { return 0.0; };
      f1 = f2 = f;
    } else {
      f = [shared, tw, y0](double t) { return tw->weight(t, y0).v; };
      f1 = [shared, tw, y0](double t) { return tw->weight(t, y0).dt; };
      f2 = [shared, tw, y0](double t) { return tw->weight(t, y0).dtt; };
    }
  }
  ProfileOptions o = opts;
  FProfile p = analytic(std::move(f), std::move(f1), std::move(f2), o);
  p.provenance_ = Provenance::from_model;
  return p;
}

QuadratureResult s_of_t_checked(const FProfile& profile, int n, double t) {
  if (t < 0.0) throw std::invalid_argument("s(t) is defined for t >= 0");
  QuadratureResult out;
  if (t == 0.0) return out;
  const double c = 2.0 / static_cast<double>(n - 1);
  const auto integrand = [&](double tau) { return std::exp(-c * profile.f(tau)); };
  double error = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, t, 15, 1e-12, &error);
  out.error = error;
  out.converged = error <= 1e-10 * std::max(1.0, out.value);
  return out;
}

double s_of_t(const FProfile& profile, int n, double t) {
  const QuadratureResult r = s_of_t_checked(profile, n, t);
  if (!r.converged) {
    throw std::runtime_error("quadrature for s(t) did not converge; error estimate " +
                             std::to_string(r.error));
  }
  return r.value;
}

std::optional<SBound> s_infinity_bound(const FProfile& profile, int n) {
  if (!profile.decay()) return std::nullopt;
  const double c = 2.0 / static_cast<double>(n - 1);
  double T = std::max(profile.decay()->from_t, 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    const double fp = profile.f1(T);
    if (fp <= 0.0) {
      T *= 2.0;
      continue;
    }
    const double g = std::exp(-c * profile.f(T));
    const double tail = g / (c * fp);
    const double sT = s_of_t(profile, n, T);
    if (tail <= 1e-12 * std::max(1.0, sT)) {
      return SBound{sT, sT + tail, T};
    }
    T *= 2.0;
  }
  return std::nullopt;
}

CompletenessReport is_future_f_complete(const FProfile& profile, int n, double horizon,
                                        double threshold) {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  CompletenessReport report;
  if (auto bound = s_infinity_bound(profile, n)) {
    report.s_infinity = bound;
    report.verdict = Completeness::incomplete_certified;
    report.s_at_horizon = s_of_t(profile, n, std::min(horizon, bound->t_used));
    report.detail = "tail bound certifies s(inf) <= " + std::to_string(bound->upper) +
                    "; the reparametrized length is finite";
    return report;
  }
  report.s_at_horizon = s_of_t(profile, n, horizon);
  if (report.s_at_horizon >= threshold) {
    report.verdict = Completeness::complete_up_to_horizon;
    report.detail = "s reached the threshold within the horizon; completeness beyond the "
                    "horizon is not certified";
  } else {
    report.verdict = Completeness::undetermined;
    report.detail = "s stayed below the threshold up to the horizon and no tail bound applies";
  }
  return report;
}

double raychaudhuri_rhs(const CongruenceState& state, double ric_along, const FProfile& profile,
                        int n, const SyntheticDimension& N) {
  require_admissible(N, n);
  const double n1 = static_cast<double>(n - 1);
  const double fp = profile.f1(state.t);
  return -(ric_along + state.shear_sq) / n1 - state.x * state.x - 2.0 * state.x * fp / n1 -
         N.riccati_fp2_coeff(n) * fp * fp;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Pair2 {
  double a = 0.0, b = 0.0;
};

template <class Rhs>
Pair2 dopri_stage(const Rhs& rhs, double t, const Pair2& y, double h, Pair2* k, Pair2& err) {
  k[0] = rhs(t, y);
  for (int i = 1; i < 7; ++i) {
    Pair2 yi = y;
    for (int j = 0; j < i; ++j) {
      yi.a += h * kA[i][j] * k[j].a;
      yi.b += h * kA[i][j] * k[j].b;
    }
    k[i] = rhs(t + kC[i] * h, yi);
  }
  Pair2 y5 = y;
  Pair2 y4 = y;
  for (int i = 0; i < 7; ++i) {
    y5.a += h * kB5[i] * k[i].a;
    y5.b += h * kB5[i] * k[i].b;
    y4.a += h * kB4[i] * k[i].a;
    y4.b += h * kB4[i] * k[i].b;
  }
  err.a = y5.a - y4.a;
  err.b = y5.b - y4.b;
  return y5;
}

// Single adaptive step; returns true and updates (t, y, h_used) on
// acceptance, otherwise shrinks h.
template <class Rhs>
bool dopri_try_step(const Rhs& rhs, double& t, Pair2& y, double& h, double rel_tol,
                    double abs_tol) {
  Pair2 k[7];
  Pair2 err;
  const Pair2 y_new = dopri_stage(rhs, t, y, h, k, err);
  const double sc_a = abs_tol + rel_tol * std::max(std::abs(y.a), std::abs(y_new.a));
  const double sc_b = abs_tol + rel_tol * std::max(std::abs(y.b), std::abs(y_new.b));
  const double e = std::sqrt(0.5 * ((err.a / sc_a) * (err.a / sc_a) +
                                    (err.b / sc_b) * (err.b / sc_b)));
  if (!std::isfinite(e) || e > 1.0) {
    const double shrink = std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
    h *= shrink;
    return false;
  }
  t += h;
  y = y_new;
  const double grow = e > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2))) : 5.0;
  h *= grow;
  return true;
}

double hermite_root(double t0, double w0, double d0, double t1, double w1, double d1) {
  // Cubic Hermite interpolant on [t0, t1]; w is monotone through the root.
  const double h = t1 - t0;
  double theta = w0 / (w0 - w1);  // secant start
  for (int it = 0; it < 60; ++it) {
    const double th2 = theta * theta;
    const double th3 = th2 * theta;
    const double H = (2 * th3 - 3 * th2 + 1) * w0 + (th3 - 2 * th2 + theta) * h * d0 +
                     (-2 * th3 + 3 * th2) * w1 + (th3 - th2) * h * d1;
    const double dH = (6 * th2 - 6 * theta) * w0 + (3 * th2 - 4 * theta + 1) * h * d0 +
                      (-6 * th2 + 6 * theta) * w1 + (3 * th2 - 2 * theta) * h * d1;
    if (dH == 0.0) break;
    const double next = theta - H / dH;
    if (!std::isfinite(next)) break;
    const double clamped = std::min(1.0, std::max(0.0, next));
    if (std::abs(clamped - theta) < 1e-15) {
      theta = clamped;
      break;
    }
    theta = clamped;
  }
  return t0 + theta * h;
}

}  // namespace

Trajectory integrate(const CongruenceState& initial, const FProfile& profile,
                     const std::function<double(double)>& ric_along, int n,
                     const SyntheticDimension& N, double t_max, const IntegrateOptions& opts) {
  require_admissible(N, n);
  if (t_max <= initial.t) throw std::invalid_argument("t_max must exceed the initial time");
  const double n1 = static_cast<double>(n - 1);
  const double q = N.riccati_fp2_coeff(n);
  const auto shear = [&](double t) { return opts.shear_sq ? opts.shear_sq(t) : 0.0; };
  const auto ric = [&](double t) { return ric_along ? ric_along(t) : 0.0; };

  // x' = F(t, x), s' = e^{-2f/(n-1)}
  const auto x_rhs = [&](double t, const Pair2& y) {
    const double fp = profile.f1(t);
    Pair2 d;
    d.a = -(ric(t) + shear(t)) / n1 - y.a * y.a - 2.0 * y.a * fp / n1 - q * fp * fp;
    d.b = std::exp(-2.0 * profile.f(t) / n1);
    return d;
  };
  // w = 1/x is regular at the pole: w' = 1 + 2 w f'/(n-1) + w^2 [(ric+shear)/(n-1) + q f'^2]
  const auto w_rhs = [&](double t, const Pair2& y) {
    const double fp = profile.f1(t);
    Pair2 d;
    d.a = 1.0 + 2.0 * y.a * fp / n1 + y.a * y.a * ((ric(t) + shear(t)) / n1 + q * fp * fp);
    d.b = std::exp(-2.0 * profile.f(t) / n1);
    return d;
  };

  Trajectory traj;
  double t = initial.t;
  Pair2 y{initial.x, initial.s};
  bool w_mode = false;
  double x_at_switch = 0.0;

  const auto record = [&](double tt, double x, double s) {
    if (std::abs(x) <= opts.record_x_cap) {
      traj.states.push_back(CongruenceState{tt, s, x, shear(tt)});
    }
  };
  record(t, y.a, y.b);

  double h = std::min(1e-3 * std::max(1.0, t_max - t), 0.5 * (t_max - t));
  long long guard = 0;
  while (t < t_max) {
    if (++guard > 50'000'000LL) throw std::runtime_error("integration step budget exhausted");
    h = std::min(h, t_max - t);
    if (!w_mode) {
      const double h_try = h;
      if (!dopri_try_step(x_rhs, t, y, h, opts.rel_tol, opts.abs_tol)) {
        const double hw_floor = 4.0 * std::numeric_limits<double>::epsilon() *
                                std::max(1.0, std::abs(t));
        if (h < hw_floor) {
          if (std::abs(y.a) > opts.x_switch) {
            traj.blowup.detected = true;
            traj.blowup.method = BlowupRecord::Method::threshold_crossing;
            traj.blowup.t_blowup = t;
            traj.blowup.x_at_cutoff = y.a;
            return traj;
          }
          throw std::runtime_error("adaptive step underflow without divergence");
        }
        continue;
      }
      record(t, y.a, y.b);
      // Divergence handling arms once |x| has passed x_switch and the
      // accepted step has collapsed below the floor.
      if (std::abs(y.a) > opts.x_switch && h_try < opts.step_floor) {
        w_mode = true;
        x_at_switch = y.a;
        y.a = 1.0 / y.a;
        h = std::max(h, 1e-3);
      }
    } else {
      const double t0 = t;
      const Pair2 y0 = y;
      if (!dopri_try_step(w_rhs, t, y, h, opts.rel_tol, opts.abs_tol)) continue;
      const double w0 = y0.a, w1 = y.a;
      if (w0 != 0.0 && ((w0 < 0.0 && w1 >= 0.0) || (w0 > 0.0 && w1 <= 0.0))) {
        // The pole: w crosses zero. Refine the root with a cubic Hermite
        // interpolant, then Richardson-combine with a halved-step pass.
        const double d0 = w_rhs(t0, y0).a;
        const double d1 = w_rhs(t, y).a;
        const double root1 = hermite_root(t0, w0, d0, t, w1, d1);

        const double h_full = t - t0;
        double tm = t0;
        Pair2 ym = y0;
        double hm = 0.5 * h_full;
        Pair2 k[7];
        Pair2 err;
        ym = dopri_stage(w_rhs, tm, ym, hm, k, err);
        tm += hm;
        double root2;
        if ((w0 < 0.0 && ym.a >= 0.0) || (w0 > 0.0 && ym.a <= 0.0)) {
          root2 = hermite_root(t0, w0, d0, tm, ym.a, w_rhs(tm, ym).a);
        } else {
          Pair2 ye = dopri_stage(w_rhs, tm, ym, hm, k, err);
          root2 = hermite_root(tm, ym.a, w_rhs(tm, ym).a, tm + hm, ye.a, w_rhs(tm + hm, ye).a);
        }
        traj.blowup.detected = true;
        traj.blowup.method = BlowupRecord::Method::richardson_extrapolated;
        traj.blowup.t_blowup = root2 + (root2 - root1) / 15.0;
        traj.blowup.x_at_cutoff = x_at_switch;
        return traj;
      }
      if (std::abs(y.a) > 2.0 / opts.x_switch) {
        // |x| has come back into the regular range
        y.a = 1.0 / y.a;
        w_mode = false;
        record(t, y.a, y.b);
      }
    }
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const FProfile& profile,
                          int n) {
  os << "t,s,x,H_f,shear_sq,f,f_prime\n";
  char buf[512];
  for (const auto& st : traj.states) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", st.t, st.s,
                  st.x, st.x * static_cast<double>(n - 1), st.shear_sq, profile.f(st.t),
                  profile.f1(st.t));
    os << buf;
  }
}

}  // namespace bem::congruence
