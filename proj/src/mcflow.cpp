#include "bemlab/mcflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bemlab/geometry.hpp"

namespace bem::mcflow {

double zeroth_coeff_line1(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N) {
  // c = -|sigma|^2 - H^2/(n-1) - Ric_f(nu,nu) with H = H_f + f' and
  // Ric_f = Ric^N_f + f'^2/(N-n).
  const double n1 = static_cast<double>(n - 1);
  const double H = H_f + f_prime;
  const double ric_f = ric_Nf + f_prime * f_prime * N.one_over_N_minus_n(n);
  return -shear_sq - H * H / n1 - ric_f;
}

double zeroth_coeff_line2(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N) {
  // c = -|sigma|^2 - (H_f + f')^2/(n-1) - Ric^N_f(nu,nu) + f'^2/(n-N).
  const double n1 = static_cast<double>(n - 1);
  const double Hff = H_f + f_prime;
  return -shear_sq - Hff * Hff / n1 - ric_Nf - f_prime * f_prime * N.one_over_N_minus_n(n);
}

double zeroth_coeff_line3(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N) {
  // c = -|sigma|^2 - (H_f^2 + 2 f' H_f)/(n-1) - Ric^N_f(nu,nu)
  //     - (1-N)/((n-1)(n-N)) f'^2.
  const double n1 = static_cast<double>(n - 1);
  return -shear_sq - (H_f * H_f + 2.0 * f_prime * H_f) / n1 - ric_Nf -
         N.flow_fp2_coeff(n) * f_prime * f_prime;
}

namespace {

void recompute_c(const FlowState& state, const FlowCoefficients& coeffs,
                 std::vector<double>& c) {
  const std::size_t m = state.phi.size();
  c.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = zeroth_coeff_line3(coeffs.H_f[i], coeffs.f_prime[i], coeffs.shear_sq[i],
                              coeffs.ric_Nf[i], coeffs.n, coeffs.N);
  }
}

void check_sizes(const FlowState& state, const FlowCoefficients& coeffs) {
  const std::size_t m = static_cast<std::size_t>(state.grid.m);
  if (state.phi.size() != m || state.f_slice.size() != m) {
    throw std::invalid_argument("flow state arrays must match the grid size");
  }
  if (coeffs.shear_sq.size() != m || coeffs.ric_Nf.size() != m || coeffs.f_prime.size() != m ||
      coeffs.H_f.size() != m) {
    throw std::invalid_argument("flow coefficient arrays must match the grid size");
  }
  require_admissible(coeffs.N, coeffs.n);
}

template <class Run>
void rhs_impl(const FlowState& state, const std::vector<double>& c, std::vector<double>& out,
              Run&& run) {
  const std::size_t m = state.phi.size();
  const double dy = state.grid.dy;
  const double inv_dy2 = 1.0 / (dy * dy);
  const double inv_2dy = 1.0 / (2.0 * dy);
  out.resize(m);
  const auto& phi = state.phi;
  const auto& f = state.f_slice;
  run(m, [&](std::size_t i) {
    const std::size_t ip = i + 1 == m ? 0 : i + 1;
    const std::size_t im = i == 0 ? m - 1 : i - 1;
    const double lap = (phi[ip] - 2.0 * phi[i] + phi[im]) * inv_dy2;
    const double fy = (f[ip] - f[im]) * inv_2dy;
    const double phiy = (phi[ip] - phi[im]) * inv_2dy;
    out[i] = lap - fy * phiy + c[i] * phi[i];
  });
}

}  // namespace

void flow_rhs_serial(const FlowState& state, const FlowCoefficients& coeffs,
                     std::vector<double>& out) {
  check_sizes(state, coeffs);
  std::vector<double> c;
  recompute_c(state, coeffs, c);
  rhs_impl(state, c, out,
           [](std::size_t count, auto&& fn) { parallel_for(count, Exec::serial, fn); });
}

void flow_rhs_omp(const FlowState& state, const FlowCoefficients& coeffs,
                  std::vector<double>& out) {
  check_sizes(state, coeffs);
  std::vector<double> c;
  recompute_c(state, coeffs, c);
  rhs_impl(state, c, out,
           [](std::size_t count, auto&& fn) { parallel_for(count, Exec::parallel, fn); });
}

std::vector<double> flow_rhs(const FlowState& state, const FlowCoefficients& coeffs, Exec exec) {
  std::vector<double> out;
  if (exec == Exec::parallel) {
    flow_rhs_omp(state, coeffs, out);
  } else {
    flow_rhs_serial(state, coeffs, out);
  }
  return out;
}

FlowTrajectory evolve(FlowState state, const FlowCoefficients& coeffs, double r_max, double dr,
                      const EvolveOptions& opts) {
  check_sizes(state, coeffs);
  if (r_max <= 0.0 || dr <= 0.0) throw std::invalid_argument("r_max and dr must be positive");
  const double dy = state.grid.dy;
  if (dr > 0.5 * dy * dy * (1.0 + 1e-12)) {
    throw std::invalid_argument("stability violation: dr must satisfy dr <= dy^2/2");
  }

  std::vector<double> c;
  recompute_c(state, coeffs, c);

  // Monotonicity of the explicit step (beyond bare stability): the update
  // must have nonnegative stencil weights.
  double min_c = *std::min_element(c.begin(), c.end());
  double max_fy = 0.0;
  {
    const std::size_t m = state.phi.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t ip = i + 1 == m ? 0 : i + 1;
      const std::size_t im = i == 0 ? m - 1 : i - 1;
      max_fy = std::max(max_fy, std::abs((state.f_slice[ip] - state.f_slice[im]) / (2.0 * dy)));
    }
  }
  FlowTrajectory traj;
  traj.monotone =
      dr * (2.0 / (dy * dy) + std::max(0.0, -min_c)) <= 1.0 + 1e-12 && max_fy * dy <= 2.0 + 1e-12;

  double max_c = *std::max_element(c.begin(), c.end());
  traj.gauge_a = max_c + 1.0;
  const double gauge_factor = std::exp(-traj.gauge_a * dr);

  std::vector<double> u;
  if (opts.gauge) u = state.phi;  // u(0) = phi(0)

  const long long steps = static_cast<long long>(std::ceil(r_max / dr - 1e-12));
  std::vector<double> rhs;
  const auto record = [&](long long k) {
    if (k % std::max(1, opts.record_every) != 0 && k != steps) return;
    traj.r.push_back(state.r);
    traj.phi.push_back(state.phi);
    if (opts.gauge) traj.u.push_back(u);
  };
  record(0);
  for (long long k = 1; k <= steps; ++k) {
    recompute_c(state, coeffs, c);
    rhs_impl(state, c, rhs,
             [&](std::size_t count, auto&& fn) { parallel_for(count, opts.exec, fn); });
    for (std::size_t i = 0; i < state.phi.size(); ++i) {
      state.phi[i] += dr * rhs[i];
    }
    if (opts.gauge) {
      // Integrating-factor step keeps u = e^{-a r} phi exact: the phi
      // update is linear, so scaling by e^{-a dr} commutes with it.
      FlowState us = state;
      us.phi = u;
      rhs_impl(us, c, rhs,
               [&](std::size_t count, auto&& fn) { parallel_for(count, opts.exec, fn); });
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = gauge_factor * (u[i] + dr * rhs[i]);
      }
    }
    state.r += dr;
    record(k);
  }
  return traj;
}

void write_flow_csv(std::ostream& os, const FlowTrajectory& traj) {
  const std::size_t m = traj.phi.empty() ? 0 : traj.phi.front().size();
  os << "r";
  for (std::size_t i = 0; i < m; ++i) os << ",node_" << i;
  os << "\n";
  char buf[64];
  for (std::size_t k = 0; k < traj.r.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.r[k]);
    os << buf;
    for (std::size_t i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", traj.phi[k][i]);
      os << buf;
    }
    os << "\n";
  }
}

RigidityReport rigidity_decomposition(double H_f, double f_prime, double shear_sq, double ric_Nf,
                                      int n, const SyntheticDimension& N, LambdaCase lambda_case,
                                      double tol) {
  require_admissible(N, n);
  const double n1 = static_cast<double>(n - 1);
  RigidityReport rep;

  double threshold = 0.0;
  switch (lambda_case) {
    case LambdaCase::zero:
      threshold = 0.0;
      break;
    case LambdaCase::minus_n_minus_1:
      threshold = -n1;
      break;
    case LambdaCase::minus_N_minus_1:
      if (N.is_infinite() || N.value() <= static_cast<double>(n)) {
        throw std::domain_error("the -(N-1) case requires a finite N > n");
      }
      threshold = -(N.value() - 1.0);
      break;
  }
  rep.equality_gap = H_f - threshold;
  rep.in_equality_branch = std::abs(rep.equality_gap) <= 1e-8;
  rep.terms.push_back({"equality_gap", rep.equality_gap});

  switch (lambda_case) {
    case LambdaCase::zero: {
      // Stationarity of x == 0 forces Ric^N_f = 0, sigma = 0 and, away
      // from N = 1, a vanishing weight rate.
      rep.terms.push_back({"ric_margin", ric_Nf});
      rep.terms.push_back({"shear_sq", shear_sq});
      const double q = N.riccati_fp2_coeff(n) * n1 * n1;  // (1-N)/(n-N), limit 1
      rep.terms.push_back({"weight_rate_sq", q * f_prime * f_prime});
      if (!N.is_infinite() && N.value() == 1.0) {
        rep.branch_note =
            "N = 1: the weight rate is unconstrained; the split is a twisted product with "
            "separable weight";
      } else {
        rep.branch_note = "product split: weight constant in t";
      }
      break;
    }
    case LambdaCase::minus_n_minus_1: {
      // 0 = -(Ric^N_f + (n-1)) - |sigma|^2 + 2 f' - (1-N)/((n-1)(n-N)) f'^2,
      // with f' <= 0 forced by the future-causal gradient.
      rep.terms.push_back({"ric_margin", ric_Nf + n1});
      rep.terms.push_back({"shear_sq", shear_sq});
      rep.terms.push_back({"weight_rate", -2.0 * f_prime});
      rep.terms.push_back({"weight_rate_sq", N.flow_fp2_coeff(n) * f_prime * f_prime});
      rep.branch_note = "warped split with rate one: weight constant";
      break;
    }
    case LambdaCase::minus_N_minus_1: {
      const double Nv = N.value();
      rep.terms.push_back({"ric_margin", ric_Nf + (Nv - 1.0)});
      rep.terms.push_back({"shear_sq", shear_sq});
      const double H = H_f + f_prime;
      rep.terms.push_back(
          {"quadratic_identity_gap", geometry::cauchy_schwarz_gap(H, f_prime, n, Nv)});
      rep.terms.push_back({"weight_rate_minus_N_minus_n",
                           f_prime - (Nv - static_cast<double>(n))});
      rep.terms.push_back({"H_plus_n_minus_1", H + n1});
      rep.branch_note = "warped split with rate one: weight linear in t with slope N - n";
      break;
    }
  }

  rep.max_abs_term = 0.0;
  for (const auto& term : rep.terms) {
    rep.max_abs_term = std::max(rep.max_abs_term, std::abs(term.value));
  }
  rep.rigid = rep.in_equality_branch && rep.max_abs_term <= tol;
  return rep;
}

nlohmann::json to_json(const RigidityReport& r) {
  nlohmann::json j;
  j["in_equality_branch"] = r.in_equality_branch;
  j["equality_gap"] = r.equality_gap;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.terms) terms.push_back({{"name", t.name}, {"value", t.value}});
  j["terms"] = terms;
  j["max_abs_term"] = r.max_abs_term;
  j["rigid"] = r.rigid;
  j["branch_note"] = r.branch_note;
  return j;
}

}  // namespace bem::mcflow
