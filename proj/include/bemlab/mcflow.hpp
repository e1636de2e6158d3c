#ifndef BEMLAB_MCFLOW_HPP_
#define BEMLAB_MCFLOW_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bemlab/parallel.hpp"
#include "bemlab/synthetic_dimension.hpp"

namespace bem::mcflow {

// Uniform periodic 1-D grid: indices wrap mod m, spacing dy.
struct FlowGrid {
  int m = 64;
  double dy = 0.1;
};

// Scalar flow state: phi = H_f - lambda per node, the slice restriction
// of f, and the zeroth-order coefficient c (recomputed from the frozen
// geometric inputs every step, never stale).
struct FlowState {
  FlowGrid grid;
  std::vector<double> phi;
  std::vector<double> f_slice;
  std::vector<double> coeff_c;
  double r = 0.0;
};

// Frozen per-node geometric inputs entering the zeroth-order coefficient.
struct FlowCoefficients {
  std::vector<double> shear_sq;
  std::vector<double> ric_Nf;   // Ric^N_f(nu, nu); the plain weighted tensor in the infinite regime
  std::vector<double> f_prime;  // normal derivative of f
  std::vector<double> H_f;
  int n = 4;
  SyntheticDimension N = SyntheticDimension::infinite();
};

// The three algebraically equivalent forms of the zeroth-order
// coefficient; they agree to machine precision and the flow uses the
// third. In the infinite regime the f'^2 coefficient of the third form
// takes its limit value 1/(n-1), matching the plain weighted tensor.
double zeroth_coeff_line1(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N);
double zeroth_coeff_line2(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N);
double zeroth_coeff_line3(double H_f, double f_prime, double shear_sq, double ric_Nf, int n,
                          const SyntheticDimension& N);

// Parabolic right-hand side Delta phi - D f . D phi + c phi with
// second-order centered stencils on the periodic grid. Serial reference
// and OpenMP variants are bitwise identical.
void flow_rhs_serial(const FlowState& state, const FlowCoefficients& coeffs,
                     std::vector<double>& out);
void flow_rhs_omp(const FlowState& state, const FlowCoefficients& coeffs,
                  std::vector<double>& out);
std::vector<double> flow_rhs(const FlowState& state, const FlowCoefficients& coeffs,
                             Exec exec = Exec::parallel);

struct EvolveOptions {
  bool gauge = false;       // also evolve u = e^{-a r} phi with a = max c + 1
  Exec exec = Exec::parallel;
  int record_every = 1;
};

struct FlowTrajectory {
  std::vector<double> r;
  std::vector<std::vector<double>> phi;  // one row per recorded step
  std::vector<std::vector<double>> u;    // gauged rows when enabled
  double gauge_a = 0.0;
  // Whether the explicit step is monotone (preserves sign order): requires
  // dr (2/dy^2 + max(0, -min c)) <= 1 and |f_y| dy <= 2 at every node.
  bool monotone = false;
};

// Explicit time stepping of the scalar flow; rejects dr > dy^2/2 at
// configuration time. The gauged variable is advanced with an exact
// integrating factor so u e^{a r} reproduces phi to round-off.
FlowTrajectory evolve(FlowState state, const FlowCoefficients& coeffs, double r_max, double dr,
                      const EvolveOptions& opts = {});

// CSV export: header r,node_0,...,node_{m-1}; 17 significant digits.
void write_flow_csv(std::ostream& os, const FlowTrajectory& traj);

enum class LambdaCase { zero, minus_n_minus_1, minus_N_minus_1 };

struct RigidityTerm {
  std::string name;
  double value = 0.0;
};

struct RigidityReport {
  bool in_equality_branch = false;
  double equality_gap = 0.0;  // H_f minus the case threshold
  std::vector<RigidityTerm> terms;
  double max_abs_term = 0.0;
  bool rigid = false;
  std::string branch_note;
};

// Evaluates the per-term decomposition that forces the splitting in the
// equality branch H_f == threshold: every term must vanish for the
// geometry to be a (warped) product. For the -(N-1) case the quadratic
// identity's equality conditions f' = N-n and H = -(n-1) are checked too.
RigidityReport rigidity_decomposition(double H_f, double f_prime, double shear_sq, double ric_Nf,
                                      int n, const SyntheticDimension& N, LambdaCase lambda_case,
                                      double tol = 1e-10);

nlohmann::json to_json(const RigidityReport& r);

}  // namespace bem::mcflow

#endif  // BEMLAB_MCFLOW_HPP_
