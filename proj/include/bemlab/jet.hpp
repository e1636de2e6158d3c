#ifndef BEMLAB_JET_HPP_
#define BEMLAB_JET_HPP_

#include <cmath>
#include <stdexcept>

namespace bem {

// Second-order truncated Taylor arithmetic in two variables (t, y).
// Carries a value together with its exact first and second partial
// derivatives, so closed-form curvature formulas stay closed-form even
// when the inputs come from parsed expressions.
struct Jet2 {
  double v = 0.0;
  double dt = 0.0;
  double dy = 0.0;
  double dtt = 0.0;
  double dty = 0.0;
  double dyy = 0.0;

  static Jet2 constant(double c) { return Jet2{c, 0, 0, 0, 0, 0}; }
  static Jet2 var_t(double t0) { return Jet2{t0, 1, 0, 0, 0, 0}; }
  static Jet2 var_y(double y0) { return Jet2{y0, 0, 1, 0, 0, 0}; }

  bool has_derivatives() const { return dt != 0 || dy != 0 || dtt != 0 || dty != 0 || dyy != 0; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.dt + b.dt, a.dy + b.dy, a.dtt + b.dtt, a.dty + b.dty, a.dyy + b.dyy};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.dt - b.dt, a.dy - b.dy, a.dtt - b.dtt, a.dty - b.dty, a.dyy - b.dyy};
}

inline Jet2 operator-(const Jet2& a) {
  return {-a.v, -a.dt, -a.dy, -a.dtt, -a.dty, -a.dyy};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  r.dt = a.dt * b.v + a.v * b.dt;
  r.dy = a.dy * b.v + a.v * b.dy;
  r.dtt = a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt;
  r.dty = a.dty * b.v + a.dt * b.dy + a.dy * b.dt + a.v * b.dty;
  r.dyy = a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy;
  return r;
}

inline Jet2 operator*(double c, const Jet2& a) { return Jet2::constant(c) * a; }

// Chain rule for a scalar function g with derivatives g1, g2 at a.v.
inline Jet2 compose(const Jet2& a, double g0, double g1, double g2) {
  Jet2 r;
  r.v = g0;
  r.dt = g1 * a.dt;
  r.dy = g1 * a.dy;
  r.dtt = g2 * a.dt * a.dt + g1 * a.dtt;
  r.dty = g2 * a.dt * a.dy + g1 * a.dty;
  r.dyy = g2 * a.dy * a.dy + g1 * a.dyy;
  return r;
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.v == 0.0) throw std::domain_error("jet division by zero");
  const double inv = 1.0 / b.v;
  return a * compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
  if (a.v <= 0.0) throw std::domain_error("jet log of non-positive value");
  return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c);
}

inline Jet2 tanh(const Jet2& a) {
  const double th = std::tanh(a.v);
  const double sech2 = 1.0 - th * th;
  return compose(a, th, sech2, -2.0 * th * sech2);
}

// pow with a constant exponent uses the power rule (valid for negative
// bases with integer exponents); a jet-valued exponent goes through
// exp(b log a) and requires a positive base.
inline Jet2 pow(const Jet2& a, const Jet2& b) {
  if (!b.has_derivatives()) {
    const double p = b.v;
    if (p == 0.0) return Jet2::constant(1.0);
    if (p == 1.0) return a;
    const double g0 = std::pow(a.v, p);
    const double g1 = p * std::pow(a.v, p - 1.0);
    const double c2 = p * (p - 1.0);
    const double g2 = (c2 == 0.0) ? 0.0 : c2 * std::pow(a.v, p - 2.0);
    return compose(a, g0, g1, g2);
  }
  return exp(b * log(a));
}

}  // namespace bem

#endif  // BEMLAB_JET_HPP_
