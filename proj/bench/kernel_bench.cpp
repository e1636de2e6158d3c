#include <benchmark/benchmark.h>

#include <cmath>

#include "bemlab/expression.hpp"
#include "bemlab/geometry.hpp"
#include "bemlab/mcflow.hpp"

using namespace bem;

namespace {

geometry::TwistedModel bench_model() {
  auto f = expr::Expression::parse("0.3*sin(t)*cos(y)+0.2*t");
  return geometry::conformal_twisted(
      4, [f](double t, double y) { return f.jet(t, y); }, {-10, 10}, {-10, 10}, 1e-3);
}

geometry::GridSpec bench_grid(int nt, int ny) {
  geometry::GridSpec g;
  g.t_min = -2.0;
  g.t_max = 2.0;
  g.t_count = nt;
  g.y_min = -2.0;
  g.y_max = 2.0;
  g.y_count = ny;
  g.chi_count = 17;
  return g;
}

void BM_TcdScanSerial(benchmark::State& state) {
  const auto model = geometry::SpacetimeModel{bench_model()};
  const auto grid = bench_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  std::vector<geometry::TcdSample> out;
  for (auto _ : state) {
    geometry::tcd_scan_serial(model, SyntheticDimension::finite(1.0), nullptr, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_TcdScanSerial)->Arg(8)->Arg(16);

void BM_TcdScanOmp(benchmark::State& state) {
  const auto model = geometry::SpacetimeModel{bench_model()};
  const auto grid = bench_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  std::vector<geometry::TcdSample> out;
  for (auto _ : state) {
    geometry::tcd_scan_omp(model, SyntheticDimension::finite(1.0), nullptr, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_TcdScanOmp)->Arg(8)->Arg(16);

mcflow::FlowState flow_state(int m) {
  mcflow::FlowState s;
  s.grid.m = m;
  s.grid.dy = 0.05;
  s.phi.resize(m);
  s.f_slice.resize(m);
  s.coeff_c.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double y = i * s.grid.dy;
    s.phi[i] = -1.0 - 0.5 * std::sin(y);
    s.f_slice[i] = 0.3 * std::cos(y);
  }
  return s;
}

mcflow::FlowCoefficients flow_coeffs(int m) {
  mcflow::FlowCoefficients c;
  c.shear_sq.assign(m, 0.0);
  c.ric_Nf.assign(m, 0.1);
  c.f_prime.assign(m, 0.2);
  c.H_f.assign(m, -1.0);
  c.n = 4;
  c.N = SyntheticDimension::infinite();
  return c;
}

void BM_FlowRhsSerial(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto s = flow_state(m);
  const auto c = flow_coeffs(m);
  std::vector<double> out;
  for (auto _ : state) {
    mcflow::flow_rhs_serial(s, c, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FlowRhsSerial)->Arg(1 << 12)->Arg(1 << 16);

void BM_FlowRhsOmp(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto s = flow_state(m);
  const auto c = flow_coeffs(m);
  std::vector<double> out;
  for (auto _ : state) {
    mcflow::flow_rhs_omp(s, c, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FlowRhsOmp)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
