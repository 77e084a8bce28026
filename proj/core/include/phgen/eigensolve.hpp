#pragma once

#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "phgen/discrete.hpp"

namespace phgen {

/// Dense solvers refuse anything larger.
inline constexpr int kMaxDenseDimension = 4096;

struct HessenbergResult {
  OperatorMatrix H;  // upper Hessenberg
  OperatorMatrix Q;  // unitary, A = Q H Q^H
};

/// Householder reduction. Columns that are already reduced are skipped, so
/// tridiagonal input passes through untouched.
HessenbergResult hessenberg(const OperatorMatrix& a);

struct QrOptions {
  /// Relative deflation threshold for subdiagonal entries.
  double tol = std::numeric_limits<double>::epsilon();
  /// Iteration budget per eigenvalue.
  int max_sweeps = 30;
};

struct SchurResult {
  OperatorMatrix T;  // upper triangular
  OperatorMatrix Q;  // unitary, A = Q T Q^H
};

/// Complex single-shift QR with Wilkinson shifts and deflation.
/// Throws ConvergenceError naming the stuck block, GuardError for n > 4096.
std::vector<Complex> qr_eigenvalues(const OperatorMatrix& a, QrOptions options = {});
SchurResult schur(const OperatorMatrix& a, QrOptions options = {});

struct EigenDecomposition {
  std::vector<Complex> values;
  std::vector<ComplexVector> vectors;  // unit 2-norm, vectors[k] pairs with values[k]
};

/// All eigenpairs, vectors by back-substitution on the Schur form.
EigenDecomposition eigen_decomposition(const OperatorMatrix& a, QrOptions options = {});

/// Inverse iteration at shift lambda until ||(A - lambda) v|| <= 1e-8 ||A|| ||v||.
/// An exactly singular shift is nudged and retried; throws ConvergenceError
/// if the residual contract is never met.
ComplexVector eigenvector(const OperatorMatrix& a, Complex lambda, int max_iterations = 50);

struct HermitianEigenpair {
  double value = 0.0;  // Rayleigh quotient
  ComplexVector vector;
};

/// Eigenpair of a Hermitian matrix closest to sigma, by inverse iteration.
HermitianEigenpair nearest_hermitian_eigenpair(const OperatorMatrix& a, double sigma,
                                               int max_iterations = 100);

/// True when a + shift I is positive definite: LDL^H without pivoting
/// with every pivot positive. Only the Hermitian part below the diagonal is read.
bool hermitian_positive_definite(const OperatorMatrix& a, double shift = 0.0);

struct SpectrumClassification {
  std::vector<Complex> eigenvalues;
  std::vector<int> real_set;
  std::vector<std::pair<int, int>> conjugate_pairs;
  std::vector<int> unpaired;
  double tol = 0.0;
  double scale = 1.0;

  double unpaired_fraction() const;
};

/// |Im| <= tol*scale is real; otherwise greedily matched to the nearest
/// conjugate, scale = max(1, max |lambda|).
SpectrumClassification spectrum_classify(const std::vector<Complex>& eigs, double tol);

/// re,im,class rows sorted by real part.
void write_spectrum_csv(std::ostream& os, const SpectrumClassification& s);

}  // namespace phgen
