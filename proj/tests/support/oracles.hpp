#pragma once

// Reference computations that share no code with the library: polynomial
// root finding in long double for eigenvalues, brute-force set matching,
// and generators for random inputs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "phgen/discrete.hpp"
#include "phgen/generator.hpp"

namespace phgen::testing {

using LComplex = std::complex<long double>;

/// Monic characteristic polynomial coefficients c[0..n] (c[n] = 1) by the
/// Faddeev-LeVerrier recursion in long double.
inline std::vector<LComplex> characteristic_polynomial(const OperatorMatrix& a) {
  const int n = a.size();
  std::vector<LComplex> A(static_cast<std::size_t>(n) * n), M(A.size(), 0.0L), AM(A.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i * n + j] = LComplex(a(i, j).real(), a(i, j).imag());
  std::vector<LComplex> c(n + 1);
  c[n] = 1.0L;
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < n; ++i) M[i * n + i] += c[n - k + 1];
    LComplex trace = 0.0L;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        LComplex s = 0.0L;
        for (int l = 0; l < n; ++l) s += A[i * n + l] * M[l * n + j];
        AM[i * n + j] = s;
      }
      trace += AM[i * n + i];
    }
    c[n - k] = -trace / static_cast<long double>(k);
    M = AM;
  }
  return c;
}

inline LComplex horner(const std::vector<LComplex>& c, LComplex z) {
  LComplex p = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
  return p;
}

/// Roots of a monic polynomial: Durand-Kerner, then Newton polishing.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<LComplex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  long double radius = 0.0L;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k]));
  radius = 1.0L + radius;
  std::vector<LComplex> z(n);
  const LComplex seed(0.4L, 0.9L);
  for (int k = 0; k < n; ++k) z[k] = radius * std::pow(seed, k + 1) / std::abs(std::pow(seed, k + 1));
  for (int it = 0; it < 2000; ++it) {
    long double change = 0.0L;
    for (int i = 0; i < n; ++i) {
      LComplex den = 1.0L;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const LComplex step = horner(c, z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-30L * radius) break;
  }
  std::vector<LComplex> dc(n);
  for (int k = 1; k <= n; ++k) dc[k - 1] = static_cast<long double>(k) * c[k];
  for (auto& r : z) {
    for (int it = 0; it < 8; ++it) {
      const LComplex d = horner(dc, r);
      if (std::abs(d) == 0.0L) break;
      r -= horner(c, r) / d;
    }
  }
  std::vector<std::complex<double>> out;
  for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  return out;
}

/// Bottleneck distance between two equal-size multisets: min over
/// bijections of the largest pairwise gap. Exhaustive, so keep n small.
inline double set_distance(std::vector<std::complex<double>> a, const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline OperatorMatrix random_matrix(int n, std::mt19937_64& rng, bool real_only = false) {
  std::normal_distribution<double> d;
  OperatorMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {d(rng), real_only ? 0.0 : d(rng)};
  return m;
}

/// Random generator specs with parameters drawn from these ranges:
///   dimension 1..4; ell 0..2 for d >= 2, random parity for d = 1;
///   mass: c (c in [0.25, 2]), c sech^2 r (c in [0.25, 1]),
///         c r^2 (c in [0.25, 1]), or a + b r^2 (a in [0.25, 1], b in [0.1, 1]);
///   f: a r (a in [0.2, 1.5]), a tanh(b r) (a in [0.2, 1], b in [0.5, 2]),
///      or a r + b exp(-c r^2) (a in [0.2, 1.5], b in [-0.5, 0.5], c in [0.5, 2]).
inline GeneratorSpec random_spec(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  GeneratorSpec s;
  s.dimension = 1 + pick(4);
  if (s.dimension == 1) {
    s.parity = pick(2) ? Parity::kEven : Parity::kOdd;
  } else {
    s.ell = pick(3);
  }
  switch (pick(4)) {
    case 0: s.mass = RadialFunction::constant(u(0.25, 2.0)); break;
    case 1: s.mass = RadialFunction::sech_pow(u(0.25, 1.0), 2); break;
    case 2: s.mass = RadialFunction::monomial(u(0.25, 1.0), 2); break;
    default:
      s.mass = RadialFunction::sum({RadialFunction::constant(u(0.25, 1.0)),
                                    RadialFunction::monomial(u(0.1, 1.0), 2)});
  }
  switch (pick(3)) {
    case 0: s.f = RadialFunction::monomial(u(0.2, 1.5), 1); break;
    case 1: s.f = RadialFunction::scaled_tanh(u(0.2, 1.0), u(0.5, 2.0)); break;
    default:
      s.f = RadialFunction::sum({RadialFunction::monomial(u(0.2, 1.5), 1),
                                 RadialFunction::gauss(u(-0.5, 0.5), u(0.5, 2.0))});
  }
  return s;
}

/// Grids for h-halving studies on a fixed interval: half-line
/// [0.05, 8.05] and symmetric full-line [-6, 6] with 0 between nodes.
inline RadialGrid refinement_grid(Domain domain, double h) {
  if (domain == Domain::kHalfLine) {
    return make_grid_with_spacing(0.05, h, static_cast<int>(std::lround(8.0 / h)) + 1, GridMode::kHalfLine);
  }
  const int n = static_cast<int>(std::lround(12.0 / h));
  return make_grid_with_spacing(-0.5 * (n - 1) * h, h, n, GridMode::kFullLine);
}

/// The default verification grids: half-line [0.05, 8], full-line [-6, 6].
inline RadialGrid default_grid(Domain domain, int n = 1600) {
  return domain == Domain::kHalfLine ? make_grid(0.05, 8.0, n, GridMode::kHalfLine)
                                     : make_grid(-6.0, 6.0, n, GridMode::kFullLine);
}

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace phgen::testing
