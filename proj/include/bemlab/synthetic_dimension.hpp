#ifndef BEMLAB_SYNTHETIC_DIMENSION_HPP_
#define BEMLAB_SYNTHETIC_DIMENSION_HPP_

#include <stdexcept>
#include <string>

namespace bem {

// The family parameter N of the weighted curvature tensor
//   Ric^N_f = Ric + Hess f - df (x) df / (N - n).
//
// The infinite regime is a distinct state, not a large sentinel value:
// every 1/(N - n) term is dropped exactly, while terms whose N -> inf
// limit is finite keep that limit.
class SyntheticDimension {
 public:
  static SyntheticDimension infinite() { return SyntheticDimension(true, 0.0); }
  static SyntheticDimension finite(double value) { return SyntheticDimension(false, value); }

  // Checked factory: values in (1, n] are rejected outright.
  static SyntheticDimension finite(double value, int n) {
    if (value > 1.0 && value <= static_cast<double>(n)) {
      throw std::domain_error("synthetic dimension " + std::to_string(value) +
                              " lies in the excluded band (1, n] for n = " + std::to_string(n));
    }
    return finite(value);
  }

  bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw std::logic_error("synthetic dimension is infinite");
    return value_;
  }

  bool admissible_for(int n) const {
    if (infinite_) return true;
    return value_ <= 1.0 || value_ > static_cast<double>(n);
  }

  // 1/(N - n); exactly zero in the infinite regime.
  double one_over_N_minus_n(int n) const {
    if (infinite_) return 0.0;
    return 1.0 / (value_ - static_cast<double>(n));
  }

  // Coefficient of f'^2 in the normalized Raychaudhuri right-hand side:
  // (1 - N) / ((n-1)^2 (n - N)), with limit 1/(n-1)^2 as N -> inf.
  double riccati_fp2_coeff(int n) const {
    const double nm1 = static_cast<double>(n - 1);
    if (infinite_) return 1.0 / (nm1 * nm1);
    return (1.0 - value_) / (nm1 * nm1 * (static_cast<double>(n) - value_));
  }

  // Coefficient of f'^2 in the flow zeroth-order coefficient:
  // (1 - N) / ((n-1)(n - N)), with limit 1/(n-1) as N -> inf.
  double flow_fp2_coeff(int n) const {
    const double nm1 = static_cast<double>(n - 1);
    if (infinite_) return 1.0 / nm1;
    return (1.0 - value_) / (nm1 * (static_cast<double>(n) - value_));
  }

  std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

  friend bool operator==(const SyntheticDimension& a, const SyntheticDimension& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  SyntheticDimension(bool inf, double value) : infinite_(inf), value_(value) {}
  bool infinite_;
  double value_;
};

inline void require_admissible(const SyntheticDimension& N, int n) {
  if (n < 2) throw std::domain_error("spacetime dimension must be at least 2");
  if (!N.admissible_for(n)) {
    throw std::domain_error("synthetic dimension " + N.str() + " is inadmissible for n = " +
                            std::to_string(n) + " (must satisfy N <= 1 or N > n)");
  }
}

}  // namespace bem

#endif  // BEMLAB_SYNTHETIC_DIMENSION_HPP_
