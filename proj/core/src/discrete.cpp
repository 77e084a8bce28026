#include "phgen/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "phgen/errors.hpp"

namespace phgen {
namespace {

void require_same(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

struct Coefficients {
  std::vector<double> mu, mu_prime, F, G;
};

Coefficients sample_o_coefficients(const ConstructedModel& model, const RadialGrid& grid) {
  Coefficients c;
  const int n = grid.n;
  c.mu.resize(n);
  c.mu_prime.resize(n);
  c.F = sample(model.F, grid);
  c.G = sample(model.G, grid);
  for (int i = 0; i < n; ++i) {
    const Taylor t = model.mu.expand(grid.nodes[i]);
    c.mu[i] = t.c[0];
    c.mu_prime[i] = t.derivative(1);
  }
  return c;
}

}  // namespace

bool RadialGrid::contains_origin() const {
  return std::any_of(nodes.begin(), nodes.end(), [](double r) { return r == 0.0; });
}

RadialGrid make_grid(double r_min, double r_max, int n, GridMode mode) {
  if (!(r_min < r_max) || !std::isfinite(r_min) || !std::isfinite(r_max)) {
    throw std::invalid_argument("make_grid: need r_min < r_max");
  }
  if (n < 16) throw std::invalid_argument("make_grid: need n >= 16");
  RadialGrid g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.n = n;
  g.mode = mode;
  g.h = (r_max - r_min) / (n - 1);
  g.nodes.resize(n);
  if (mode == GridMode::kHalfLine) {
    if (!(r_min > 0.0)) throw std::invalid_argument("make_grid: half-line grids need r_min > 0");
    for (int i = 0; i < n; ++i) g.nodes[i] = r_min + i * g.h;
    g.nodes[n - 1] = r_max;
  } else {
    if (std::abs(r_min + r_max) > 1e-12 * r_max) {
      throw std::invalid_argument("make_grid: full-line grids must be symmetric, [-L, L]");
    }
    const double centre = 0.5 * (n - 1);
    for (int i = 0; i < n; ++i) g.nodes[i] = g.h * (i - centre);
  }
  return g;
}

RadialGrid make_grid_with_spacing(double r_min, double h, int n, GridMode mode) {
  if (!(h > 0.0)) throw std::invalid_argument("make_grid_with_spacing: need h > 0");
  RadialGrid g = make_grid(r_min, r_min + (n - 1) * h, n, mode);
  g.h = h;
  if (mode == GridMode::kHalfLine) {
    for (int i = 0; i < n; ++i) g.nodes[i] = r_min + i * h;
  } else {
    const double centre = 0.5 * (n - 1);
    for (int i = 0; i < n; ++i) g.nodes[i] = h * (i - centre);
  }
  g.r_max = g.nodes[n - 1];
  return g;
}

OperatorMatrix OperatorMatrix::identity(int n) {
  OperatorMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

OperatorMatrix OperatorMatrix::diagonal(std::span<const Complex> d) {
  OperatorMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.size(); ++i) m(i, i) = d[i];
  return m;
}

int OperatorMatrix::lower_bandwidth() const {
  int b = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < i - b; ++j) {
      if ((*this)(i, j) != Complex{}) {
        b = i - j;
        break;
      }
    }
  }
  return b;
}

int OperatorMatrix::upper_bandwidth() const {
  int b = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = n_ - 1; j > i + b; --j) {
      if ((*this)(i, j) != Complex{}) {
        b = j - i;
        break;
      }
    }
  }
  return b;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& b) {
  require_same(n_, b.n_, "matrix +");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& b) {
  require_same(n_, b.n_, "matrix -");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  for (auto& v : a_) v *= s;
  return *this;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
OperatorMatrix operator*(Complex s, OperatorMatrix a) { return a *= s; }

ComplexVector apply_span(const OperatorMatrix& m, std::span<const Complex> v) {
  require_same(m.size(), static_cast<int>(v.size()), "apply");
  const int n = m.size();
  ComplexVector out(n);
  for (int i = 0; i < n; ++i) {
    const auto row = m.row(i);
    Complex s{};
    for (int j = 0; j < n; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

OperatorMatrix adjoint(const OperatorMatrix& m) {
  const int n = m.size();
  OperatorMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same(a.size(), b.size(), "matmul");
  const int n = a.size();
  OperatorMatrix out(n);
  for (int i = 0; i < n; ++i) {
    auto orow = out.row(i);
    const auto arow = a.row(i);
    for (int k = 0; k < n; ++k) {
      const Complex aik = arow[k];
      if (aik == Complex{}) continue;
      const auto brow = b.row(k);
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

OperatorMatrix gram(const OperatorMatrix& a) {
  const int n = a.size();
  const int lo = a.lower_bandwidth();
  const int hi = a.upper_bandwidth();
  OperatorMatrix out(n);
  for (int i = 0; i < n; ++i) {
    // Column i of a is nonzero only in rows [i - hi, i + lo].
    for (int j = i; j < n; ++j) {
      const int k0 = std::max({0, i - hi, j - hi});
      const int k1 = std::min({n - 1, i + lo, j + lo});
      Complex s{};
      for (int k = k0; k <= k1; ++k) s += std::conj(a(k, i)) * a(k, j);
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
    out(i, i) = out(i, i).real();
  }
  return out;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double interior_norm(std::span<const Complex> v, int margin) {
  const int n = static_cast<int>(v.size());
  if (2 * margin >= n) throw DimensionError("interior_norm: margin too large");
  return norm2(v.subspan(margin, n - 2 * margin));
}

double max_row_sum(const OperatorMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (const auto& x : m.row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

double max_abs_entry(const OperatorMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (const auto& x : m.row(i)) best = std::max(best, std::abs(x));
  return best;
}

double hermiticity_defect(const OperatorMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = i; j < m.size(); ++j) best = std::max(best, std::abs(m(i, j) - std::conj(m(j, i))));
  return best;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  require_same(static_cast<int>(a.size()), static_cast<int>(b.size()), "vector +");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  require_same(static_cast<int>(a.size()), static_cast<int>(b.size()), "vector -");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ComplexVector operator*(Complex s, const ComplexVector& a) {
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  require_same(static_cast<int>(a.size()), static_cast<int>(b.size()), "inner");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

OperatorMatrix first_diff(const RadialGrid& grid) {
  const int n = grid.n;
  const double c = 1.0 / (2.0 * grid.h);
  OperatorMatrix d(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) d(i, i - 1) = -c;
    if (i + 1 < n) d(i, i + 1) = c;
  }
  return d;
}

OperatorMatrix second_diff(const RadialGrid& grid) {
  const int n = grid.n;
  const double c = 1.0 / (grid.h * grid.h);
  OperatorMatrix d(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) d(i, i - 1) = c;
    d(i, i) = -2.0 * c;
    if (i + 1 < n) d(i, i + 1) = c;
  }
  return d;
}

std::vector<double> sample(const RadialFunction& fun, const RadialGrid& grid) {
  std::vector<double> out(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    try {
      out[i] = fun.eval(grid.nodes[i]);
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "node " << i << " (r = " << grid.nodes[i] << "): " << e.what();
      throw DomainError(msg.str());
    }
  }
  return out;
}

namespace {

void require_model_domain(const ConstructedModel& model, const RadialGrid& grid) {
  for (int i = 0; i < grid.n; ++i) {
    if (!contains(model.domain, grid.nodes[i])) {
      std::ostringstream msg;
      msg << "node " << i << " (r = " << grid.nodes[i] << ") lies outside the model domain "
          << to_string(model.domain);
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

ComplexVector sample_psi(const ConstructedModel& model, const RadialGrid& grid) {
  require_model_domain(model, grid);
  const auto modulus = sample(model.psi_modulus, grid);
  const auto phase = sample(model.psi_phase, grid);
  ComplexVector out(grid.n);
  for (int i = 0; i < grid.n; ++i) out[i] = std::polar(1.0, phase[i]) * modulus[i];
  return out;
}

namespace {

// diag(row_scale) * stencil, written row by row over the stencil's band.
void add_scaled_rows(OperatorMatrix& out, const OperatorMatrix& stencil,
                     std::span<const Complex> row_scale) {
  const int n = out.size();
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      out(i, j) += row_scale[i] * stencil(i, j);
    }
  }
}

}  // namespace

OperatorMatrix discretize_kinetic(const ConstructedModel& model, const RadialGrid& grid) {
  require_model_domain(model, grid);
  const int n = grid.n;
  ComplexVector a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.nodes[i];
    Taylor m;
    try {
      m = model.mass.expand(r);
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "node " << i << " (r = " << r << "): " << e.what();
      throw DomainError(msg.str());
    }
    const double mv = m.c[0];
    if (!(mv > 0.0)) {
      std::ostringstream msg;
      msg << "node " << i << " (r = " << r << "): nonpositive mass";
      throw DomainError(msg.str());
    }
    a[i] = -1.0 / (2.0 * mv);
    b[i] = m.derivative(1) / (2.0 * mv * mv);
  }
  OperatorMatrix k(n);
  add_scaled_rows(k, second_diff(grid), a);
  add_scaled_rows(k, first_diff(grid), b);
  return k;
}

ComplexVector potential_diagonal(const ConstructedModel& model, const RadialGrid& grid) {
  require_model_domain(model, grid);
  const auto v = sample(model.V_tilde_minus_beta, grid);
  const auto w = sample(model.W, grid);
  ComplexVector out(grid.n);
  for (int i = 0; i < grid.n; ++i) out[i] = Complex(v[i] + model.beta, w[i]);
  return out;
}

OperatorMatrix discretize_H(const ConstructedModel& model, const RadialGrid& grid) {
  OperatorMatrix h = discretize_kinetic(model, grid);
  const auto pot = potential_diagonal(model, grid);
  for (int i = 0; i < grid.n; ++i) h(i, i) += pot[i];
  return h;
}

OperatorMatrix discretize_O(const ConstructedModel& model, const RadialGrid& grid) {
  require_model_domain(model, grid);
  const auto c = sample_o_coefficients(model, grid);
  const int n = grid.n;
  ComplexVector mu(c.mu.begin(), c.mu.end());
  OperatorMatrix o(n);
  add_scaled_rows(o, first_diff(grid), mu);
  for (int i = 0; i < n; ++i) o(i, i) += Complex(c.F[i], c.G[i]);
  return o;
}

ODaggerPair discretize_O_dagger(const ConstructedModel& model, const RadialGrid& grid) {
  const auto c = sample_o_coefficients(model, grid);
  const int n = grid.n;
  ComplexVector minus_mu(n);
  for (int i = 0; i < n; ++i) minus_mu[i] = -c.mu[i];
  OperatorMatrix formula(n);
  add_scaled_rows(formula, first_diff(grid), minus_mu);
  for (int i = 0; i < n; ++i) formula(i, i) += Complex(c.F[i] - c.mu_prime[i], -c.G[i]);
  return {std::move(formula), adjoint(discretize_O(model, grid))};
}

OperatorMatrix discretize_eta(const ConstructedModel& model, const RadialGrid& grid,
                              EtaMethod method) {
  if (method == EtaMethod::kFactored) return gram(discretize_O(model, grid));
  require_model_domain(model, grid);

  const int n = grid.n;
  ComplexVector second(n), first(n), zeroth(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.nodes[i];
    const Taylor mu = model.mu.expand(r);
    const Taylor F = model.F.expand(r);
    const Taylor G = model.G.expand(r);
    const double m0 = mu.c[0];
    const double m1 = mu.derivative(1);
    const Complex z(F.c[0], G.c[0]);
    const Complex z1(F.derivative(1), G.derivative(1));
    second[i] = -m0 * m0;
    first[i] = Complex(-2.0 * m0 * m1, -2.0 * m0 * G.c[0]);
    zeroth[i] = -(m0 * z1 + m1 * z - F.c[0] * F.c[0] - G.c[0] * G.c[0]);
  }
  OperatorMatrix eta(n);
  add_scaled_rows(eta, second_diff(grid), second);
  add_scaled_rows(eta, first_diff(grid), first);
  for (int i = 0; i < n; ++i) eta(i, i) += zeroth[i];
  return eta;
}

void write_csv(std::ostream& os, const RadialGrid& grid, std::span<const Complex> v) {
  require_same(grid.n, static_cast<int>(v.size()), "write_csv");
  os << "r,re,im\n";
  for (int i = 0; i < grid.n; ++i) {
    put(os, grid.nodes[i]);
    os << ',';
    put(os, v[i].real());
    os << ',';
    put(os, v[i].imag());
    os << '\n';
  }
}

void write_csv(std::ostream& os, const RadialGrid& grid, const OperatorMatrix& m) {
  require_same(grid.n, m.size(), "write_csv");
  os << 'r';
  for (int j = 0; j < m.size(); ++j) os << ",re" << j << ",im" << j;
  os << '\n';
  for (int i = 0; i < m.size(); ++i) {
    put(os, grid.nodes[i]);
    for (int j = 0; j < m.size(); ++j) {
      os << ',';
      put(os, m(i, j).real());
      os << ',';
      put(os, m(i, j).imag());
    }
    os << '\n';
  }
}

}  // namespace phgen
