#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bemlab/expression.hpp"
#include "bemlab/geometry.hpp"
#include "bemlab/mcflow.hpp"

using namespace bem;

namespace {

geometry::SpacetimeModel twisted_fixture() {
  auto f = expr::Expression::parse("0.3*sin(t)*cos(y)+0.1*t");
  return geometry::conformal_twisted(
      4, [f](double t, double y) { return f.jet(t, y); }, {-10, 10}, {-10, 10}, 2e-3);
}

geometry::GridSpec grid_fixture() {
  geometry::GridSpec g;
  g.t_min = -1.5;
  g.t_max = 1.5;
  g.t_count = 7;
  g.y_min = -1.0;
  g.y_max = 1.0;
  g.y_count = 5;
  g.chi_count = 9;
  return g;
}

bool bitwise_equal(const std::vector<geometry::TcdSample>& a,
                   const std::vector<geometry::TcdSample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(a[i])) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("tcd scan: the OpenMP kernel is bitwise identical to the serial reference") {
  const auto model = twisted_fixture();
  const auto grid = grid_fixture();
  const auto N = SyntheticDimension::finite(1.0);

  std::vector<geometry::TcdSample> serial, parallel;
  geometry::tcd_scan_serial(model, N, nullptr, grid, serial);
  geometry::tcd_scan_omp(model, N, nullptr, grid, parallel);
  REQUIRE(serial.size() == static_cast<std::size_t>(grid.t_count * grid.y_count));
  CHECK(bitwise_equal(serial, parallel));
}

#ifdef _OPENMP
TEST_CASE("tcd scan: output does not depend on the thread count") {
  const auto model = twisted_fixture();
  const auto grid = grid_fixture();
  const auto N = SyntheticDimension::infinite();

  const int saved = omp_get_max_threads();
  std::vector<geometry::TcdSample> one, many;
  omp_set_num_threads(1);
  geometry::tcd_scan_omp(model, N, nullptr, grid, one);
  omp_set_num_threads(saved > 1 ? saved : 4);
  geometry::tcd_scan_omp(model, N, nullptr, grid, many);
  omp_set_num_threads(saved);
  CHECK(bitwise_equal(one, many));
}
#endif

TEST_CASE("flow right-hand side: serial and OpenMP kernels match bitwise") {
  const int m = 257;  // odd size to exercise the wrap-around
  mcflow::FlowState s;
  s.grid.m = m;
  s.grid.dy = 0.05;
  s.phi.resize(m);
  s.f_slice.resize(m);
  s.coeff_c.assign(m, 0.0);
  mcflow::FlowCoefficients c;
  c.shear_sq.resize(m);
  c.ric_Nf.resize(m);
  c.f_prime.resize(m);
  c.H_f.resize(m);
  c.n = 5;
  c.N = SyntheticDimension::finite(-2.0);
  for (int i = 0; i < m; ++i) {
    const double y = 2.0 * M_PI * i / m;
    s.phi[i] = -0.3 - 0.2 * std::sin(3 * y);
    s.f_slice[i] = 0.4 * std::cos(y);
    c.shear_sq[i] = 0.1 * (1 + std::sin(y)) * (1 + std::sin(y));
    c.ric_Nf[i] = 0.2 * std::cos(2 * y);
    c.f_prime[i] = 0.3 * std::sin(y);
    c.H_f[i] = -1.0 + 0.5 * std::cos(y);
  }
  std::vector<double> serial, parallel;
  mcflow::flow_rhs_serial(s, c, serial);
  mcflow::flow_rhs_omp(s, c, parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i] == parallel[i]);
  }
}

TEST_CASE("evolve is deterministic across execution policies") {
  const int m = 64;
  mcflow::FlowState s;
  s.grid.m = m;
  s.grid.dy = 0.1;
  s.phi.resize(m);
  s.f_slice.resize(m);
  s.coeff_c.assign(m, 0.0);
  mcflow::FlowCoefficients c;
  c.shear_sq.assign(m, 0.0);
  c.ric_Nf.assign(m, 0.1);
  c.f_prime.assign(m, 0.0);
  c.H_f.assign(m, -1.0);
  c.n = 4;
  c.N = SyntheticDimension::infinite();
  for (int i = 0; i < m; ++i) {
    s.phi[i] = -0.1 * (1 + std::sin(2 * M_PI * i / m));
    s.f_slice[i] = 0.2 * std::cos(2 * M_PI * i / m);
  }
  mcflow::EvolveOptions serial_opts;
  serial_opts.exec = Exec::serial;
  mcflow::EvolveOptions parallel_opts;
  parallel_opts.exec = Exec::parallel;
  const auto a = mcflow::evolve(s, c, 0.1, 0.004, serial_opts);
  const auto b = mcflow::evolve(s, c, 0.1, 0.004, parallel_opts);
  REQUIRE(a.phi.size() == b.phi.size());
  for (std::size_t k = 0; k < a.phi.size(); ++k) {
    for (int i = 0; i < m; ++i) {
      CHECK(a.phi[k][i] == b.phi[k][i]);
    }
  }
}

TEST_CASE("parallel check reports match the serial reference end to end") {
  const auto model = twisted_fixture();
  const auto grid = grid_fixture();
  const auto N = SyntheticDimension::finite(1.0);
  geometry::TcdOptions serial_opts{1e-9, Exec::serial};
  geometry::TcdOptions parallel_opts{1e-9, Exec::parallel};
  const auto a = geometry::check_tcd(model, N, nullptr, grid, serial_opts);
  const auto b = geometry::check_tcd(model, N, nullptr, grid, parallel_opts);
  CHECK(a.satisfied == b.satisfied);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_t == b.worst_t);
  CHECK(a.worst_chi == b.worst_chi);
  CHECK(a.null_worst_coeff == b.null_worst_coeff);
}
