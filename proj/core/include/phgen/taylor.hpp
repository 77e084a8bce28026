#pragma once

// Truncated Taylor arithmetic. A Taylor holds normalized coefficients
// c[k] = u^(k)(r) / k! for k = 0..order. Every radial function evaluates to
// one of these, so derivatives are exact up to rounding.

#include <array>
#include <cmath>

namespace phgen {

inline constexpr int kTaylorMaxOrder = 5;

struct Taylor {
  std::array<double, kTaylorMaxOrder + 1> c{};
  int order = kTaylorMaxOrder;

  static Taylor constant(double v) {
    Taylor t;
    t.c[0] = v;
    return t;
  }
  /// The identity r -> r expanded at r0.
  static Taylor variable(double r0) {
    Taylor t;
    t.c[0] = r0;
    t.c[1] = 1.0;
    return t;
  }

  double value() const { return c[0]; }
  /// k-th derivative, k <= order.
  double derivative(int k) const;
};

Taylor operator+(const Taylor& a, const Taylor& b);
Taylor operator-(const Taylor& a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator*(double s, const Taylor& a);
Taylor operator/(const Taylor& a, const Taylor& b);

Taylor exp(const Taylor& u);
/// u^p; requires u0 != 0 (u0 > 0 unless p is an integer).
Taylor pow(const Taylor& u, double p);
Taylor tanh(const Taylor& u);
Taylor cosh(const Taylor& u);
Taylor sinh(const Taylor& u);
/// Coefficients of u'. Loses one order.
Taylor differentiate(const Taylor& u);
/// Coefficients of U with U' = u and U(r0) = value. Gains no order beyond max.
Taylor integrate(const Taylor& u, double value);

}  // namespace phgen
