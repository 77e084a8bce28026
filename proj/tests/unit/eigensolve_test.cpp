#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "phgen/catalog.hpp"
#include "phgen/eigensolve.hpp"
#include "phgen/errors.hpp"

using namespace phgen;
using phgen::testing::characteristic_polynomial;
using phgen::testing::polynomial_roots;
using phgen::testing::random_matrix;
using phgen::testing::set_distance;

namespace {

double frobenius(const OperatorMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

Complex trace(const OperatorMatrix& m) {
  Complex t = 0.0;
  for (int i = 0; i < m.size(); ++i) t += m(i, i);
  return t;
}

}  // namespace

TEST_CASE("hessenberg reduction") {
  std::mt19937_64 rng(11);
  const OperatorMatrix a = random_matrix(4, rng);
  const auto [h, q] = hessenberg(a);
  for (int i = 2; i < 4; ++i)
    for (int j = 0; j < i - 1; ++j) CHECK(h(i, j) == Complex(0.0));
  CHECK(frobenius(matmul(matmul(adjoint(q), a), q) - h) / frobenius(a) <= 1e-12);
  CHECK(frobenius(matmul(adjoint(q), q) - OperatorMatrix::identity(4)) <= 1e-13);

  const OperatorMatrix already = h;
  const auto again = hessenberg(already);
  CHECK(frobenius(again.H - already) <= 1e-13 * frobenius(already));

  const OperatorMatrix b = random_matrix(5, rng);
  const auto roots = polynomial_roots(characteristic_polynomial(b));
  CHECK(set_distance(qr_eigenvalues(hessenberg(b).H), roots) <= 1e-9);
}

TEST_CASE("QR eigenvalues on small known cases") {
  const auto ones = qr_eigenvalues(OperatorMatrix::identity(3));
  REQUIRE(ones.size() == 3);
  for (const auto& e : ones) CHECK(std::abs(e - 1.0) <= 1e-15);

  OperatorMatrix rot(2);
  rot(0, 1) = 1.0;
  rot(1, 0) = -1.0;
  const auto pm = qr_eigenvalues(rot);
  CHECK(set_distance(pm, {Complex(0, 1), Complex(0, -1)}) <= 1e-14);

  std::mt19937_64 rng(3);
  const OperatorMatrix real6 = random_matrix(6, rng, true);
  CHECK(set_distance(qr_eigenvalues(real6), polynomial_roots(characteristic_polynomial(real6))) <= 1e-8);
  const OperatorMatrix one(1);
  CHECK(qr_eigenvalues(one).size() == 1);
}

TEST_CASE("Schur form is a backward-stable factorization") {
  std::mt19937_64 rng(5);
  for (int n : {3, 10, 40}) {
    const OperatorMatrix a = random_matrix(n, rng);
    const auto [t, q] = schur(a);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) CHECK(t(i, j) == Complex(0.0));
    const double backward = frobenius(matmul(matmul(q, t), adjoint(q)) - a) / frobenius(a);
    CHECK(backward <= 10.0 * n * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("non-convergence names the stuck block") {
  std::mt19937_64 rng(9);
  const OperatorMatrix a = random_matrix(12, rng);
  try {
    qr_eigenvalues(a, {std::numeric_limits<double>::epsilon(), 0});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("block") != std::string::npos);
  }
}

TEST_CASE("spectrum invariants") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix a = random_matrix(30, rng);
    const auto eigs = qr_eigenvalues(a);
    Complex sum = 0.0;
    for (const auto& e : eigs) sum += e;
    CHECK(std::abs(sum - trace(a)) <= 1e-8 * 30 * max_row_sum(a));

    const auto q = hessenberg(random_matrix(30, rng)).Q;  // a random unitary
    const auto similar = qr_eigenvalues(matmul(matmul(adjoint(q), a), q));
    double worst = 0.0;
    for (const auto& e : eigs) {
      double best = 1e300;
      for (const auto& s : similar) best = std::min(best, std::abs(e - s));
      worst = std::max(worst, best);
    }
    CHECK(worst <= 1e-10 * max_row_sum(a));
  }
  const OperatorMatrix real = random_matrix(25, rng, true);
  const auto cls = spectrum_classify(qr_eigenvalues(real), 1e-10);
  CHECK(cls.unpaired.empty());
}

TEST_CASE("spectrum classification") {
  const auto c = spectrum_classify({Complex(1, 0), Complex(2, 1), Complex(2, -1)}, 1e-8);
  CHECK(c.real_set.size() == 1);
  CHECK(c.conjugate_pairs.size() == 1);
  CHECK(c.unpaired.empty());
  CHECK(c.unpaired_fraction() == 0.0);
  const auto r = spectrum_classify({Complex(-3, 0), Complex(0.5, 0), Complex(7, 0)}, 1e-8);
  CHECK(r.real_set.size() == 3);
  const auto u = spectrum_classify({Complex(1, 1), Complex(1, -1.5), Complex(4, 0)}, 1e-3);
  CHECK(u.unpaired.size() == 2);
  CHECK(u.unpaired_fraction() == doctest::Approx(2.0 / 3.0));
  CHECK(u.scale == doctest::Approx(4.0));
  // the tolerance is relative to max(1, max |lambda|)
  const auto big = spectrum_classify({Complex(1e6, 0.5)}, 1e-6);
  CHECK(big.real_set.size() == 1);

  std::ostringstream os;
  write_spectrum_csv(os, spectrum_classify({Complex(3, 0), Complex(-1, 2), Complex(-1, -2)}, 1e-8));
  CHECK(os.str() == "re,im,class\n-1,-2,pair\n-1,2,pair\n3,0,real\n");
}

TEST_CASE("eigenvectors by inverse iteration") {
  std::vector<Complex> d{1.0, 2.0, 5.0, -3.0};
  const OperatorMatrix diag = OperatorMatrix::diagonal(d);
  const auto v = eigenvector(diag, 5.0);
  CHECK(std::abs(v[2]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(v[0]) + std::abs(v[1]) + std::abs(v[3]) <= 1e-12);

  OperatorMatrix rot(2);
  rot(0, 1) = 1.0;
  rot(1, 0) = -1.0;
  const auto w = eigenvector(rot, Complex(0, 1));
  CHECK(std::abs(w[1] - Complex(0, 1) * w[0]) <= 1e-10);

  const ConstructedModel m = construct(get_example("1A").spec);
  const OperatorMatrix h = discretize_H(m, make_grid(0.05, 8, 200, GridMode::kHalfLine));
  const auto eigs = qr_eigenvalues(h);
  for (int k = 0; k < 200; k += 37) {
    const auto x = eigenvector(h, eigs[k]);
    const auto hx = apply(h, x);
    ComplexVector res(hx.size());
    for (std::size_t i = 0; i < hx.size(); ++i) res[i] = hx[i] - eigs[k] * x[i];
    CHECK(norm2(res) <= 1e-8 * max_row_sum(h) * norm2(x));
  }
}

TEST_CASE("full eigendecomposition") {
  std::mt19937_64 rng(17);
  const OperatorMatrix a = random_matrix(20, rng);
  const auto ed = eigen_decomposition(a);
  REQUIRE(ed.values.size() == 20);
  for (int k = 0; k < 20; ++k) {
    CHECK(norm2(ed.vectors[k]) == doctest::Approx(1.0).epsilon(1e-12));
    const auto av = apply(a, ed.vectors[k]);
    ComplexVector res(20);
    for (int i = 0; i < 20; ++i) res[i] = av[i] - ed.values[k] * ed.vectors[k][i];
    CHECK(norm2(res) <= 1e-10 * max_row_sum(a));
  }
}

TEST_CASE("Hermitian helpers") {
  const int n = 50;
  OperatorMatrix lap(n);
  for (int i = 0; i < n; ++i) {
    lap(i, i) = 2.0;
    if (i > 0) lap(i, i - 1) = -1.0;
    if (i + 1 < n) lap(i, i + 1) = -1.0;
  }
  const double lowest = 2.0 - 2.0 * std::cos(M_PI / (n + 1));
  const auto pair = nearest_hermitian_eigenpair(lap, 0.0);
  CHECK(pair.value == doctest::Approx(lowest).epsilon(1e-10));
  CHECK(hermitian_positive_definite(lap));
  CHECK_FALSE(hermitian_positive_definite(lap, -0.01));
  CHECK(hermitian_positive_definite(lap, -0.5 * lowest));
}
