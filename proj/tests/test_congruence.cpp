#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "bemlab/congruence.hpp"
#include "bemlab/geometry.hpp"

using namespace bem;
using namespace bem::congruence;

namespace {

FProfile exp_profile() {
  ProfileOptions po;
  po.decay = DecayCertificate{0.0};
  return FProfile::analytic([](double t) { return std::exp(t); },
                            [](double t) { return std::exp(t); },
                            [](double t) { return std::exp(t); }, po);
}

// Independent quadrature oracle: composite Simpson on a fixed fine grid.
double simpson_s(const std::function<double(double)>& f, int n, double t, int cells = 20000) {
  const double c = 2.0 / (n - 1);
  const double h = t / cells;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = i * h, b = a + h, m = a + 0.5 * h;
    acc += (h / 6.0) * (std::exp(-c * f(a)) + 4.0 * std::exp(-c * f(m)) + std::exp(-c * f(b)));
  }
  return acc;
}

}  // namespace

TEST_CASE("profile construction cross-checks the derivative triple") {
  CHECK_THROWS_AS(FProfile::analytic([](double t) { return t * t; },
                                     [](double) { return 1.0; },  // wrong derivative
                                     [](double) { return 2.0; }),
                  std::invalid_argument);
  CHECK_NOTHROW(FProfile::analytic([](double t) { return t * t; },
                                   [](double t) { return 2 * t; },
                                   [](double) { return 2.0; }));
}

TEST_CASE("reparametrized time: closed cases") {
  const auto zero = FProfile::zero();
  CHECK(s_of_t(zero, 4, 0.0) == 0.0);
  CHECK(s_of_t(zero, 4, 3.7) == doctest::Approx(3.7).epsilon(1e-12));

  // Constant weight rescales uniformly.
  const auto k = FProfile::constant(1.5);
  for (int n : {3, 4, 7}) {
    CHECK(s_of_t(k, n, 2.0) == doctest::Approx(2.0 * std::exp(-3.0 / (n - 1))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(s_of_t(zero, 4, -1.0), std::invalid_argument);
}

TEST_CASE("reparametrized time against the Simpson oracle") {
  const auto f = [](double t) { return 0.4 * std::sin(t) + 0.1 * t; };
  const auto prof = FProfile::analytic(
      f, [](double t) { return 0.4 * std::cos(t) + 0.1; },
      [](double t) { return -0.4 * std::sin(t); });
  for (double t : {0.5, 2.0, 7.0}) {
    CHECK(s_of_t(prof, 4, t) == doctest::Approx(simpson_s(f, 4, t)).epsilon(1e-9));
  }
}

TEST_CASE("exponential weight has a finite certified reparametrized length") {
  // Oracle value of the full integral, frozen from an independent
  // high-precision evaluation of int_0^inf e^{-(2/3) e^t} dt.
  const double frozen = 0.39840899307027998;
  const auto prof = exp_profile();
  const auto bound = s_infinity_bound(prof, 4);
  REQUIRE(bound.has_value());
  CHECK(bound->lower <= frozen + 1e-12);
  CHECK(bound->upper >= frozen - 1e-12);
  CHECK(bound->upper - bound->lower < 1e-10);

  const auto report = is_future_f_complete(prof, 4, 10.0, 10.0);
  CHECK(report.verdict == Completeness::incomplete_certified);
}

TEST_CASE("completeness tri-state") {
  // Zero weight reaches any threshold not exceeding the horizon.
  CHECK(is_future_f_complete(FProfile::zero(), 4, 10.0, 10.0).verdict ==
        Completeness::complete_up_to_horizon);
  // Decreasing weight: integrand e^{2t/(n-1)} >= 1 reaches threshold 10
  // well before t = 10 (small horizon).
  const auto lin = FProfile::analytic([](double t) { return -t; }, [](double) { return -1.0; },
                                      [](double) { return 0.0; });
  const auto rep = is_future_f_complete(lin, 4, 3.1, 10.0);
  CHECK(rep.verdict == Completeness::complete_up_to_horizon);
  // Same weight, horizon too small: undetermined, not incomplete.
  CHECK(is_future_f_complete(lin, 4, 1.0, 10.0).verdict == Completeness::undetermined);
}

TEST_CASE("evolution right-hand side: pinned values") {
  const auto zero = FProfile::zero();
  CHECK(raychaudhuri_rhs({0, 0, 0, 0}, 0.0, zero, 4, SyntheticDimension::infinite()) == 0.0);
  // Steady state x = -1 with curvature at the -(n-1) floor.
  for (int n : {3, 4, 6}) {
    CHECK(raychaudhuri_rhs({0, 0, -1.0, 0}, -(n - 1.0), zero, n, SyntheticDimension::infinite()) ==
          doctest::Approx(0.0));
  }
  // n = 4, N = 1, x = -1, f' = 2: the quadratic weight term drops and
  // -x^2 - 2 x f'/(n-1) = -1 + 4/3 = 1/3.
  const auto f2 = FProfile::analytic([](double t) { return 2.0 * t; }, [](double) { return 2.0; },
                                     [](double) { return 0.0; });
  const CongruenceState st{0, 0, -1.0, 0};
  const double rhs = raychaudhuri_rhs(st, 0.0, f2, 4, SyntheticDimension::finite(1.0));
  CHECK(rhs == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // Cross-check against the unnormalized first form
  // H_f' = -ric - |sigma|^2 - H^2/(n-1) - f'^2/(N-n) with H = H_f + f'.
  const double H_f = -3.0, fp = 2.0;
  const double H = H_f + fp;
  const double first_form = -0.0 - 0.0 - H * H / 3.0 - fp * fp / (1.0 - 4.0);
  CHECK(rhs == doctest::Approx(first_form / 3.0).epsilon(1e-14));
}

TEST_CASE("classic focusing: pole of the separable equation") {
  const auto zero = FProfile::zero();
  for (double delta : {0.1, 0.5, 2.0}) {
    const auto traj = integrate({0, 0, -delta, 0}, zero, nullptr, 4,
                                SyntheticDimension::infinite(), 3.0 / delta);
    REQUIRE(traj.blowup.detected);
    REQUIRE(traj.blowup.t_blowup.has_value());
    CHECK(*traj.blowup.t_blowup == doctest::Approx(1.0 / delta).epsilon(1e-8));
    CHECK(traj.blowup.method == BlowupRecord::Method::richardson_extrapolated);
    // Analytic solution x = -delta/(1 - delta t) along the way.
    for (const auto& st : traj.states) {
      if (st.t > 0.9 / delta) break;
      CHECK(st.x == doctest::Approx(-delta / (1.0 - delta * st.t)).epsilon(1e-7));
    }
  }
}

TEST_CASE("constant negative floor: coth comparison solution") {
  const auto zero = FProfile::zero();
  for (double delta : {0.5, 1.0, 3.0}) {
    const auto traj = integrate({0, 0, -(1.0 + delta), 0}, zero, [](double) { return -3.0; }, 4,
                                SyntheticDimension::infinite(), 2.0);
    REQUIRE(traj.blowup.detected);
    const double tp = std::atanh(1.0 / (1.0 + delta));
    CHECK(*traj.blowup.t_blowup == doctest::Approx(tp).epsilon(1e-8));
    for (const auto& st : traj.states) {
      if (st.t >= tp) break;
      CHECK(st.x <= -1.0 / std::tanh(tp - st.t) + 1e-8);
    }
  }
}

TEST_CASE("no false focusing for the exponential-weight profile") {
  // Oracle: dense fixed-step fourth-order run stays bounded.
  const auto prof = exp_profile();
  const double delta = 0.05;
  double x = -delta;
  const double h = 1e-5;
  const auto rhs = [&](double t, double xx) {
    const double fp = std::exp(t);
    return -xx * xx - 2.0 * xx * fp / 3.0 - fp * fp / 9.0;
  };
  for (double t = 0.0; t < 3.0; t += h) {
    const double k1 = rhs(t, x);
    const double k2 = rhs(t + h / 2, x + h / 2 * k1);
    const double k3 = rhs(t + h / 2, x + h / 2 * k2);
    const double k4 = rhs(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK(std::abs(x) < 10.0);

  const auto traj = integrate({0, 0, -delta, 0}, prof, nullptr, 4,
                              SyntheticDimension::infinite(), 3.0);
  CHECK_FALSE(traj.blowup.detected);
  // Adaptive trajectory agrees with the dense oracle at the endpoint.
  CHECK(traj.states.back().x == doctest::Approx(x).epsilon(1e-6));
}

TEST_CASE("s is strictly increasing and consistent with the profile") {
  const auto f = FProfile::analytic([](double t) { return 0.3 * std::sin(t); },
                                    [](double t) { return 0.3 * std::cos(t); },
                                    [](double t) { return -0.3 * std::sin(t); });
  const auto traj = integrate({0, 0, -0.4, 0}, f, nullptr, 4, SyntheticDimension::finite(0.0), 1.5);
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const auto& a = traj.states[i - 1];
    const auto& b = traj.states[i];
    CHECK(b.s > a.s);
    // Midpoint slope agrees with e^{-2f/(n-1)} to integrator accuracy.
    const double mid = 0.5 * (a.t + b.t);
    const double slope = (b.s - a.s) / (b.t - a.t);
    CHECK(slope == doctest::Approx(std::exp(-2.0 * f.f(mid) / 3.0)).epsilon(1e-4));
    // s recomputed by quadrature matches the integrated s.
    if (i % 16 == 0) {
      CHECK(b.s == doctest::Approx(s_of_t(f, 4, b.t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("comparison inequality and sign preservation under a nonnegative floor") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> amp(0.1, 1.0), freq(0.3, 2.0), d0(0.1, 2.0);
  for (int rep = 0; rep < 12; ++rep) {
    const double af = amp(rng), wf = freq(rng), ar = amp(rng), wr = freq(rng);
    const double delta = d0(rng);
    const auto prof = FProfile::analytic(
        [=](double t) { return af * std::sin(wf * t); },
        [=](double t) { return af * wf * std::cos(wf * t); },
        [=](double t) { return -af * wf * wf * std::sin(wf * t); });
    const auto ric = [=](double t) {
      const double s = std::sin(wr * t);
      return ar * s * s;  // >= 0
    };
    const bool use_inf = rep % 2 == 0;
    const auto N = use_inf ? SyntheticDimension::infinite() : SyntheticDimension::finite(0.5);
    const int n = 4;
    const auto traj = integrate({0, 0, -delta, 0}, prof, ric, n, N, 40.0);
    const double a0 = std::exp(-2.0 * prof.f(0.0) / 3.0);
    for (const auto& st : traj.states) {
      CHECK(st.x < 0.0);  // sign preserved
      const double denom = a0 / delta - st.s;
      if (denom > 1e-6) {
        const double bound = -std::exp(-2.0 * prof.f(st.t) / 3.0) / denom;
        CHECK(st.x <= bound + 1e-6);
      }
    }
  }
}

TEST_CASE("substitution identity: the s-domain form reproduces the t-domain run") {
  // y(s) = e^{2f/(n-1)} x satisfies dy/ds = -e^{4f/(n-1)} [(ric+sh)/(n-1)
  // + q f'^2] - y^2, together with dt/ds = e^{2f/(n-1)}. Integrating that
  // system with a fixed-step RK4 in s must match the adaptive t-domain run.
  const int n = 4;
  const auto N = SyntheticDimension::finite(0.5);
  const auto prof = FProfile::analytic([](double t) { return 0.25 * std::cos(t); },
                                       [](double t) { return -0.25 * std::sin(t); },
                                       [](double t) { return -0.25 * std::cos(t); });
  const auto ric = [](double t) { return 0.3 + 0.2 * std::sin(t); };
  const double q = N.riccati_fp2_coeff(n);

  const auto traj = integrate({0, 0, -0.3, 0}, prof, ric, n, N, 1.5);

  const auto dyds = [&](double t, double yv) {
    const double fp = prof.f1(t);
    const double e2 = std::exp(2.0 * prof.f(t) / 3.0);
    return -e2 * e2 * (ric(t) / 3.0 + q * fp * fp) - yv * yv;
  };
  const auto dtds = [&](double tt) { return std::exp(2.0 * prof.f(tt) / 3.0); };

  double t = 0.0;
  double yv = std::exp(2.0 * prof.f(0.0) / 3.0) * (-0.3);
  const double hs = 1e-4;
  std::size_t idx = 0;
  double max_err = 0.0;
  for (int step = 0; step < 40000 && idx < traj.states.size(); ++step) {
    const double t0 = t, y0 = yv;
    const double dydt0 = dyds(t0, y0) / dtds(t0);
    const double k1y = dyds(t, yv), k1t = dtds(t);
    const double k2y = dyds(t + hs / 2 * k1t, yv + hs / 2 * k1y), k2t = dtds(t + hs / 2 * k1t);
    const double k3y = dyds(t + hs / 2 * k2t, yv + hs / 2 * k2y), k3t = dtds(t + hs / 2 * k2t);
    const double k4y = dyds(t + hs * k3t, yv + hs * k3y), k4t = dtds(t + hs * k3t);
    yv += hs / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    t += hs / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
    const double dydt1 = dyds(t, yv) / dtds(t);
    // Cubic Hermite interpolation in t at each recorded trajectory time.
    while (idx < traj.states.size() && traj.states[idx].t <= t) {
      const double ts = traj.states[idx].t;
      const double ht = t - t0;
      const double th = (ts - t0) / ht;
      const double th2 = th * th, th3 = th2 * th;
      const double y_at = (2 * th3 - 3 * th2 + 1) * y0 + (th3 - 2 * th2 + th) * ht * dydt0 +
                          (-2 * th3 + 3 * th2) * yv + (th3 - th2) * ht * dydt1;
      const double x_here = y_at * std::exp(-2.0 * prof.f(ts) / 3.0);
      max_err = std::max(max_err, std::abs(x_here - traj.states[idx].x));
      ++idx;
    }
  }
  CHECK(idx == traj.states.size());
  CHECK(max_err < 1e-8);
}

TEST_CASE("blow-up time is stable under tolerance refinement") {
  const auto zero = FProfile::zero();
  IntegrateOptions coarse;
  coarse.rel_tol = 1e-10;
  IntegrateOptions fine;
  fine.rel_tol = 5e-11;
  const auto a = integrate({0, 0, -1.5, 0}, zero, [](double) { return -3.0; }, 4,
                           SyntheticDimension::infinite(), 3.0, coarse);
  const auto b = integrate({0, 0, -1.5, 0}, zero, [](double) { return -3.0; }, 4,
                           SyntheticDimension::infinite(), 3.0, fine);
  CHECK(std::abs(*a.blowup.t_blowup - *b.blowup.t_blowup) < 10.0 * coarse.rel_tol);
}

TEST_CASE("csv export carries the documented columns at full precision") {
  const auto f = FProfile::constant(0.25);
  const auto traj = integrate({0, 0, -0.2, 0}, f, nullptr, 4, SyntheticDimension::infinite(), 1.0);
  std::ostringstream os;
  write_trajectory_csv(os, traj, f, 4);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,s,x,H_f,shear_sq,f,f_prime");
  std::string first;
  std::getline(in, first);
  CHECK(first.substr(0, 2) == "0,");
  CHECK(first.find("0.25") != std::string::npos);
  // 17 significant digits means a round-trippable double: spot-check x0.
  CHECK(first.find("-0.2000000000000000") != std::string::npos);
}
