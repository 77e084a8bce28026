#include "phgen/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "phgen/errors.hpp"

namespace phgen {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void guard(int n, const char* what) {
  if (n > kMaxDenseDimension) {
    std::ostringstream msg;
    msg << what << ": n = " << n << " exceeds the dense limit of " << kMaxDenseDimension;
    throw GuardError(msg.str());
  }
}

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// G = [c, s; -conj(s), c] with G [a; b] = [r; 0].
struct Rotation {
  double c = 1.0;
  Complex s{};
};

Rotation make_givens(Complex a, Complex b) {
  if (b == Complex{}) return {1.0, {}};
  if (a == Complex{}) return {0.0, 1.0};
  const double aa = std::abs(a);
  const double rho = std::hypot(aa, std::abs(b));
  return {aa / rho, (a / aa) * std::conj(b) / rho};
}

// Rows i, i+1 <- G * rows, over columns [c0, c1).
void rotate_rows(OperatorMatrix& m, int i, Rotation g, int c0, int c1) {
  auto ri = m.row(i);
  auto rk = m.row(i + 1);
  for (int j = c0; j < c1; ++j) {
    const Complex x = ri[j];
    const Complex y = rk[j];
    ri[j] = g.c * x + g.s * y;
    rk[j] = -std::conj(g.s) * x + g.c * y;
  }
}

// Columns i, i+1 <- columns * G^H, over rows [r0, r1).
void rotate_cols(OperatorMatrix& m, int i, Rotation g, int r0, int r1) {
  const Complex sc = std::conj(g.s);
  for (int k = r0; k < r1; ++k) {
    Complex& x = m(k, i);
    Complex& y = m(k, i + 1);
    const Complex xv = x;
    x = xv * g.c + y * sc;
    y = -xv * g.s + y * g.c;
  }
}

Complex wilkinson_shift(const OperatorMatrix& t, int iu, int iter) {
  if ((iter == 10 || iter == 20) && iu >= 2) {
    // Exceptional shift to break cycles.
    return std::abs(t(iu, iu - 1).real()) + std::abs(t(iu - 1, iu - 2).real());
  }
  Complex t00 = t(iu - 1, iu - 1), t01 = t(iu - 1, iu), t10 = t(iu, iu - 1), t11 = t(iu, iu);
  const double norm = std::abs(t00) + std::abs(t01) + std::abs(t10) + std::abs(t11);
  if (norm == 0.0) return 0.0;
  t00 /= norm;
  t01 /= norm;
  t10 /= norm;
  t11 /= norm;
  const Complex b = t01 * t10;
  const Complex c = t00 - t11;
  const Complex disc = std::sqrt(c * c + 4.0 * b);
  const Complex det = t00 * t11 - b;
  const Complex trace = t00 + t11;
  Complex e1 = 0.5 * (trace + disc);
  Complex e2 = 0.5 * (trace - disc);
  const double n1 = abs1(e1), n2 = abs1(e2);
  // The smaller root is recomputed from the larger to avoid cancellation.
  if (n1 > n2) {
    e2 = det / e1;
  } else if (n2 != 0.0) {
    e1 = det / e2;
  }
  return norm * (abs1(e1 - t11) < abs1(e2 - t11) ? e1 : e2);
}

// Reduces an upper Hessenberg t in place. With full = false only the active
// window is updated, which is enough for eigenvalues.
void reduce_to_triangular(OperatorMatrix& t, OperatorMatrix* q, bool full, QrOptions options) {
  const int n = t.size();
  const long max_iter = static_cast<long>(options.max_sweeps) * std::max(n, 1);
  const auto negligible = [&](int i) {
    const double bound = options.tol * (abs1(t(i, i)) + abs1(t(i + 1, i + 1)));
    if (abs1(t(i + 1, i)) <= bound || abs1(t(i + 1, i)) < std::numeric_limits<double>::min()) {
      t(i + 1, i) = 0.0;
      return true;
    }
    return false;
  };

  int iu = n - 1;
  int iter = 0;
  long total = 0;
  while (true) {
    while (iu > 0 && negligible(iu - 1)) {
      iter = 0;
      --iu;
    }
    if (iu <= 0) break;
    ++iter;
    if (++total > max_iter) {
      int il = iu - 1;
      while (il > 0 && t(il, il - 1) != Complex{}) --il;
      std::ostringstream msg;
      msg << "QR iteration did not converge: active block [" << il << ", " << iu << "] after "
          << total - 1 << " iterations";
      throw ConvergenceError(msg.str());
    }
    int il = iu - 1;
    while (il > 0 && !negligible(il - 1)) --il;

    const int col_end = full ? n : iu + 1;
    const int row_begin = full ? 0 : il;
    const Complex shift = wilkinson_shift(t, iu, iter);
    Rotation g = make_givens(t(il, il) - shift, t(il + 1, il));
    rotate_rows(t, il, g, il, col_end);
    rotate_cols(t, il, g, row_begin, std::min(il + 2, iu) + 1);
    if (q) rotate_cols(*q, il, g, 0, n);
    for (int i = il + 1; i < iu; ++i) {
      // Chase the bulge at (i+1, i-1).
      g = make_givens(t(i, i - 1), t(i + 1, i - 1));
      rotate_rows(t, i, g, i - 1, col_end);
      t(i + 1, i - 1) = 0.0;
      rotate_cols(t, i, g, row_begin, std::min(i + 2, iu) + 1);
      if (q) rotate_cols(*q, i, g, 0, n);
    }
  }
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) t(i, j) = 0.0;
}

// Banded LU with partial pivoting; interchanges are applied to the right-hand
// side step by step, so multipliers can stay in place.
class BandLU {
 public:
  BandLU(const OperatorMatrix& a, Complex shift) : n_(a.size()), a_(a) {
    lb_ = a.lower_bandwidth();
    ub_ = a.upper_bandwidth();
    for (int i = 0; i < n_; ++i) a_(i, i) -= shift;
  }

  // False on an exactly zero pivot.
  bool factor() {
    piv_.assign(n_, 0);
    for (int k = 0; k < n_; ++k) {
      const int rmax = std::min(n_ - 1, k + lb_);
      const int cmax = std::min(n_ - 1, k + lb_ + ub_);
      int p = k;
      double best = std::abs(a_(k, k));
      for (int i = k + 1; i <= rmax; ++i) {
        const double v = std::abs(a_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best == 0.0) return false;
      piv_[k] = p;
      if (p != k)
        for (int j = k; j <= cmax; ++j) std::swap(a_(k, j), a_(p, j));
      const Complex inv = 1.0 / a_(k, k);
      const auto rk = a_.row(k);
      for (int i = k + 1; i <= rmax; ++i) {
        const Complex l = a_(i, k) * inv;
        if (l == Complex{}) continue;
        a_(i, k) = l;
        auto ri = a_.row(i);
        for (int j = k + 1; j <= cmax; ++j) ri[j] -= l * rk[j];
      }
    }
    return true;
  }

  void solve(ComplexVector& b) const {
    for (int k = 0; k < n_; ++k) {
      std::swap(b[k], b[piv_[k]]);
      const int rmax = std::min(n_ - 1, k + lb_);
      for (int i = k + 1; i <= rmax; ++i) b[i] -= a_(i, k) * b[k];
    }
    const int w = lb_ + ub_;
    for (int i = n_ - 1; i >= 0; --i) {
      Complex s = b[i];
      const int jmax = std::min(n_ - 1, i + w);
      const auto ri = a_.row(i);
      for (int j = i + 1; j <= jmax; ++j) s -= ri[j] * b[j];
      b[i] = s / ri[i];
    }
  }

 private:
  int n_;
  int lb_ = 0, ub_ = 0;
  OperatorMatrix a_;
  std::vector<int> piv_;
};

BandLU factor_with_reshift(const OperatorMatrix& a, Complex shift) {
  const double scale = std::max(max_row_sum(a), std::numeric_limits<double>::min());
  double nudge = kEps * scale;
  for (int attempt = 0; attempt < 8; ++attempt) {
    BandLU lu(a, shift);
    if (lu.factor()) return lu;
    shift += Complex(nudge, nudge);
    nudge *= 16.0;
  }
  throw ConvergenceError("inverse iteration: shift stays singular after reshifting");
}

ComplexVector start_vector(int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.5 * std::sin(0.7 * i), 0.3 * std::cos(1.3 * i));
  const double s = norm2(v);
  for (auto& x : v) x /= s;
  return v;
}

void normalize(ComplexVector& v) {
  const double s = norm2(v);
  if (!(s > 0.0) || !std::isfinite(s)) throw ConvergenceError("inverse iteration: degenerate iterate");
  for (auto& x : v) x /= s;
}

double shifted_residual(const OperatorMatrix& a, const ComplexVector& v, Complex lambda) {
  auto av = apply(a, v);
  for (std::size_t i = 0; i < v.size(); ++i) av[i] -= lambda * v[i];
  return norm2(av);
}

}  // namespace

HessenbergResult hessenberg(const OperatorMatrix& a) {
  const int n = a.size();
  guard(n, "hessenberg");
  HessenbergResult out{a, OperatorMatrix::identity(n)};
  OperatorMatrix& h = out.H;
  OperatorMatrix& q = out.Q;
  ComplexVector v(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (int i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = x0 == Complex{} ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    // v = x - alpha e1, normalized, on indices k+1..n-1.
    v[k + 1] = x0 - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vn = 0.0;
    for (int i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    for (int i = k + 1; i < n; ++i) v[i] /= vn;

    // Left: h[k+1:, k:] -= 2 v (v^H h[k+1:, k:]).
    std::fill(w.begin(), w.end(), Complex{});
    for (int i = k + 1; i < n; ++i) {
      const Complex vc = std::conj(v[i]);
      const auto ri = h.row(i);
      for (int j = k; j < n; ++j) w[j] += vc * ri[j];
    }
    for (int i = k + 1; i < n; ++i) {
      const Complex vi = 2.0 * v[i];
      auto ri = h.row(i);
      for (int j = k; j < n; ++j) ri[j] -= vi * w[j];
    }
    // Right: m[:, k+1:] -= 2 (m[:, k+1:] v) v^H, for m = h and q.
    for (OperatorMatrix* m : {&h, &q}) {
      for (int r = 0; r < n; ++r) {
        auto row = m->row(r);
        Complex s{};
        for (int j = k + 1; j < n; ++j) s += row[j] * v[j];
        s *= 2.0;
        for (int j = k + 1; j < n; ++j) row[j] -= s * std::conj(v[j]);
      }
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return out;
}

std::vector<Complex> qr_eigenvalues(const OperatorMatrix& a, QrOptions options) {
  const int n = a.size();
  guard(n, "qr_eigenvalues");
  if (!(options.tol > 0.0)) throw std::invalid_argument("qr_eigenvalues: tol must be positive");
  OperatorMatrix t = hessenberg(a).H;
  reduce_to_triangular(t, nullptr, false, options);
  std::vector<Complex> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = t(i, i);
  return eigs;
}

SchurResult schur(const OperatorMatrix& a, QrOptions options) {
  guard(a.size(), "schur");
  if (!(options.tol > 0.0)) throw std::invalid_argument("schur: tol must be positive");
  auto [h, q] = hessenberg(a);
  reduce_to_triangular(h, &q, true, options);
  return {std::move(h), std::move(q)};
}

EigenDecomposition eigen_decomposition(const OperatorMatrix& a, QrOptions options) {
  const int n = a.size();
  const auto [t, q] = schur(a, options);
  const double small = std::max(kEps * max_abs_entry(t), std::numeric_limits<double>::min());
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n);
  ComplexVector x(n);
  for (int k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    out.values[k] = lambda;
    std::fill(x.begin(), x.end(), Complex{});
    x[k] = 1.0;
    for (int i = k - 1; i >= 0; --i) {
      Complex s{};
      const auto ri = t.row(i);
      for (int j = i + 1; j <= k; ++j) s += ri[j] * x[j];
      Complex d = ri[i] - lambda;
      if (std::abs(d) < small) d = small;
      x[i] = -s / d;
    }
    ComplexVector v(n);
    for (int r = 0; r < n; ++r) {
      const auto qr = q.row(r);
      Complex s{};
      for (int j = 0; j <= k; ++j) s += qr[j] * x[j];
      v[r] = s;
    }
    normalize(v);
    out.vectors[k] = std::move(v);
  }
  return out;
}

ComplexVector eigenvector(const OperatorMatrix& a, Complex lambda, int max_iterations) {
  const int n = a.size();
  guard(n, "eigenvector");
  const double anorm = max_row_sum(a);
  const BandLU lu = factor_with_reshift(a, lambda);
  ComplexVector v = start_vector(n);
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    lu.solve(v);
    normalize(v);
    best = shifted_residual(a, v, lambda);
    if (best <= 1e-8 * anorm) return v;
  }
  std::ostringstream msg;
  msg << "inverse iteration did not reach the residual target (" << best << " vs " << 1e-8 * anorm
      << ")";
  throw ConvergenceError(msg.str());
}

HermitianEigenpair nearest_hermitian_eigenpair(const OperatorMatrix& a, double sigma,
                                               int max_iterations) {
  const int n = a.size();
  guard(n, "nearest_hermitian_eigenpair");
  const double anorm = max_row_sum(a);
  const BandLU lu = factor_with_reshift(a, sigma);
  ComplexVector v = start_vector(n);
  double theta = sigma;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    lu.solve(v);
    normalize(v);
    theta = inner(v, apply(a, v)).real();
    residual = shifted_residual(a, v, theta);
    if (residual <= 1e-12 * anorm) break;
  }
  if (!(residual <= 1e-8 * anorm)) {
    std::ostringstream msg;
    msg << "Hermitian inverse iteration stalled (residual " << residual << ")";
    throw ConvergenceError(msg.str());
  }
  return {theta, std::move(v)};
}

bool hermitian_positive_definite(const OperatorMatrix& a, double shift) {
  const int n = a.size();
  guard(n, "hermitian_positive_definite");
  const int b = a.lower_bandwidth();
  // l stores the unit lower factor; d the pivots.
  OperatorMatrix l(n);
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) {
    const int k0 = std::max(0, j - b);
    double dj = a(j, j).real() + shift;
    for (int k = k0; k < j; ++k) dj -= std::norm(l(j, k)) * d[k];
    if (!(dj > 0.0)) return false;
    d[j] = dj;
    const int imax = std::min(n - 1, j + b);
    for (int i = j + 1; i <= imax; ++i) {
      Complex s = a(i, j);
      for (int k = std::max(0, i - b); k < j; ++k) s -= l(i, k) * std::conj(l(j, k)) * d[k];
      l(i, j) = s / dj;
    }
  }
  return true;
}

double SpectrumClassification::unpaired_fraction() const {
  if (eigenvalues.empty()) return 0.0;
  return static_cast<double>(unpaired.size()) / static_cast<double>(eigenvalues.size());
}

SpectrumClassification spectrum_classify(const std::vector<Complex>& eigs, double tol) {
  SpectrumClassification s;
  s.eigenvalues = eigs;
  s.tol = tol;
  double radius = 0.0;
  for (const auto& z : eigs) radius = std::max(radius, std::abs(z));
  s.scale = std::max(1.0, radius);
  const double cut = tol * s.scale;
  const int n = static_cast<int>(eigs.size());
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i) {
    if (std::abs(eigs[i].imag()) <= cut) {
      s.real_set.push_back(i);
      used[i] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    int best = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i || used[j]) continue;
      const double dj = std::abs(eigs[i] - std::conj(eigs[j]));
      if (dj < dist) {
        dist = dj;
        best = j;
      }
    }
    used[i] = 1;
    if (best >= 0 && dist <= cut) {
      used[best] = 1;
      s.conjugate_pairs.emplace_back(i, best);
    } else {
      s.unpaired.push_back(i);
    }
  }
  return s;
}

void write_spectrum_csv(std::ostream& os, const SpectrumClassification& s) {
  const int n = static_cast<int>(s.eigenvalues.size());
  std::vector<const char*> cls(n, "unpaired");
  for (int i : s.real_set) cls[i] = "real";
  for (auto [i, j] : s.conjugate_pairs) cls[i] = cls[j] = "pair";
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = s.eigenvalues[a];
    const auto& y = s.eigenvalues[b];
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  os << "re,im,class\n";
  char buf[80];
  for (int i : order) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.eigenvalues[i].real(), s.eigenvalues[i].imag());
    os << buf << cls[i] << '\n';
  }
}

}  // namespace phgen
