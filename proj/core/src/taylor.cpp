#include "phgen/taylor.hpp"

#include <algorithm>
#include <stdexcept>

namespace phgen {
namespace {

constexpr int N = kTaylorMaxOrder;

constexpr std::array<double, N + 1> kFactorial = [] {
  std::array<double, N + 1> f{};
  f[0] = 1.0;
  for (int k = 1; k <= N; ++k) f[k] = f[k - 1] * k;
  return f;
}();

bool is_nonnegative_integer(double p) { return p >= 0.0 && std::floor(p) == p; }

}  // namespace

double Taylor::derivative(int k) const {
  if (k < 0 || k > order) throw std::out_of_range("Taylor: derivative order unavailable");
  return c[k] * kFactorial[k];
}

Taylor operator+(const Taylor& a, const Taylor& b) {
  Taylor y;
  y.order = std::min(a.order, b.order);
  for (int k = 0; k <= N; ++k) y.c[k] = a.c[k] + b.c[k];
  return y;
}

Taylor operator-(const Taylor& a, const Taylor& b) {
  Taylor y;
  y.order = std::min(a.order, b.order);
  for (int k = 0; k <= N; ++k) y.c[k] = a.c[k] - b.c[k];
  return y;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor y;
  y.order = std::min(a.order, b.order);
  for (int k = 0; k <= N; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    y.c[k] = s;
  }
  return y;
}

Taylor operator*(double s, const Taylor& a) {
  Taylor y = a;
  for (auto& v : y.c) v *= s;
  return y;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  Taylor y;
  y.order = std::min(a.order, b.order);
  for (int k = 0; k <= N; ++k) {
    double s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * y.c[k - j];
    y.c[k] = s / b.c[0];
  }
  return y;
}

Taylor exp(const Taylor& u) {
  Taylor y;
  y.order = u.order;
  y.c[0] = std::exp(u.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u.c[j] * y.c[k - j];
    y.c[k] = s / k;
  }
  return y;
}

Taylor pow(const Taylor& u, double p) {
  if (is_nonnegative_integer(p) && p <= 16.0) {
    Taylor y = Taylor::constant(1.0);
    y.order = u.order;
    for (int i = 0; i < static_cast<int>(p); ++i) y = y * u;
    return y;
  }
  Taylor y;
  y.order = u.order;
  y.c[0] = std::pow(u.c[0], p);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * u.c[j] * y.c[k - j];
    y.c[k] = s / (k * u.c[0]);
  }
  return y;
}

Taylor tanh(const Taylor& u) {
  Taylor y;
  Taylor w;  // 1 - y^2, filled as y grows
  y.order = w.order = u.order;
  y.c[0] = std::tanh(u.c[0]);
  w.c[0] = 1.0 - y.c[0] * y.c[0];
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u.c[j] * w.c[k - j];
    y.c[k] = s / k;
    double sq = 0.0;
    for (int j = 0; j <= k; ++j) sq += y.c[j] * y.c[k - j];
    w.c[k] = -sq;
  }
  return y;
}

namespace {

void cosh_sinh(const Taylor& u, Taylor& ch, Taylor& sh) {
  ch = Taylor{};
  sh = Taylor{};
  ch.order = sh.order = u.order;
  ch.c[0] = std::cosh(u.c[0]);
  sh.c[0] = std::sinh(u.c[0]);
  for (int k = 1; k <= N; ++k) {
    double sc = 0.0;
    double ss = 0.0;
    for (int j = 1; j <= k; ++j) {
      sc += j * u.c[j] * sh.c[k - j];
      ss += j * u.c[j] * ch.c[k - j];
    }
    ch.c[k] = sc / k;
    sh.c[k] = ss / k;
  }
}

}  // namespace

Taylor cosh(const Taylor& u) {
  Taylor ch, sh;
  cosh_sinh(u, ch, sh);
  return ch;
}

Taylor sinh(const Taylor& u) {
  Taylor ch, sh;
  cosh_sinh(u, ch, sh);
  return sh;
}

Taylor differentiate(const Taylor& u) {
  Taylor y;
  y.order = std::max(0, u.order - 1);
  for (int k = 0; k < N; ++k) y.c[k] = (k + 1) * u.c[k + 1];
  y.c[N] = 0.0;
  if (u.order == 0) y.order = -1;
  return y;
}

Taylor integrate(const Taylor& u, double value) {
  Taylor y;
  y.order = std::min(N, u.order + 1);
  y.c[0] = value;
  for (int k = 1; k <= N; ++k) y.c[k] = u.c[k - 1] / k;
  return y;
}

}  // namespace phgen
