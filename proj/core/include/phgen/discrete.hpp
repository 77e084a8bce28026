#pragma once

#include <complex>
#include <concepts>
#include <iosfwd>
#include <span>
#include <type_traits>
#include <vector>

#include "phgen/generator.hpp"

namespace phgen {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

enum class GridMode { kHalfLine, kFullLine };

/// Uniform grid. Full-line grids are symmetric; an even node count keeps 0
/// between the two central nodes.
struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int n = 0;
  double h = 0.0;
  GridMode mode = GridMode::kHalfLine;
  std::vector<double> nodes;

  bool contains_origin() const;
};

/// Throws std::invalid_argument for bad bounds, n < 16, or an asymmetric
/// full-line request.
RadialGrid make_grid(double r_min, double r_max, int n, GridMode mode);
/// [r_min, r_min + (n-1) h] for an exact spacing h.
RadialGrid make_grid_with_spacing(double r_min, double h, int n, GridMode mode);

/// Dense complex square matrix, row-major.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  static OperatorMatrix identity(int n);
  static OperatorMatrix diagonal(std::span<const Complex> d);

  int size() const { return n_; }
  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const Complex& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<Complex> row(int i) { return {a_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)}; }
  std::span<const Complex> row(int i) const {
    return {a_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }

  /// Largest |i - j| with a nonzero entry, below and above the diagonal.
  int lower_bandwidth() const;
  int upper_bandwidth() const;

  OperatorMatrix& operator+=(const OperatorMatrix& b);
  OperatorMatrix& operator-=(const OperatorMatrix& b);
  OperatorMatrix& operator*=(Complex s);

  friend bool operator==(const OperatorMatrix&, const OperatorMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<Complex> a_;
};

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex s, OperatorMatrix a);

ComplexVector apply_span(const OperatorMatrix& m, std::span<const Complex> v);
/// m v. Written as a constrained forwarding template so that it, and not
/// std::apply found through ADL, is chosen for every argument category.
template <class M, class V>
  requires std::same_as<std::remove_cvref_t<M>, OperatorMatrix>
ComplexVector apply(M&& m, V&& v) {
  return apply_span(m, std::span<const Complex>(v));
}
OperatorMatrix adjoint(const OperatorMatrix& m);
/// Dense product; skips structural zeros of a, so banded factors are cheap.
OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b);
/// a^H a, with both triangles written from one computation so the result is
/// exactly Hermitian.
OperatorMatrix gram(const OperatorMatrix& a);

double norm2(std::span<const Complex> v);
/// 2-norm over indices [margin, n - margin).
double interior_norm(std::span<const Complex> v, int margin);
/// Infinity norm (max row sum of moduli).
double max_row_sum(const OperatorMatrix& m);
double max_abs_entry(const OperatorMatrix& m);
/// max |m - m^H| entrywise.
double hermiticity_defect(const OperatorMatrix& m);

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(Complex s, const ComplexVector& a);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // a^H b

/// Central first difference, exactly antisymmetric, zero Dirichlet closure.
OperatorMatrix first_diff(const RadialGrid& grid);
/// Three-point second difference, zero Dirichlet closure.
OperatorMatrix second_diff(const RadialGrid& grid);

/// Samples fun at the nodes; DomainError names the offending node.
std::vector<double> sample(const RadialFunction& fun, const RadialGrid& grid);
ComplexVector sample_psi(const ConstructedModel& model, const RadialGrid& grid);

/// -(1/2m) D2 + (m'/2m^2) D1.
OperatorMatrix discretize_kinetic(const ConstructedModel& model, const RadialGrid& grid);
/// V~ + i W at the nodes.
ComplexVector potential_diagonal(const ConstructedModel& model, const RadialGrid& grid);
/// kinetic + diag(V~ + i W).
OperatorMatrix discretize_H(const ConstructedModel& model, const RadialGrid& grid);
/// mu D1 + diag(F + i G).
OperatorMatrix discretize_O(const ConstructedModel& model, const RadialGrid& grid);

struct ODaggerPair {
  OperatorMatrix formula;  // -mu D1 - mu' + (F - i G)
  OperatorMatrix adjoint;  // conjugate transpose of discretize_O
};
ODaggerPair discretize_O_dagger(const ConstructedModel& model, const RadialGrid& grid);

enum class EtaMethod {
  kFactored,  // adjoint(O) O
  kDirect,    // -mu^2 D2 - (2 mu mu' + 2 i mu G) D1 - (mu Z' + mu' Z - F^2 - G^2)
};
OperatorMatrix discretize_eta(const ConstructedModel& model, const RadialGrid& grid,
                              EtaMethod method);

/// r, re, im per row.
void write_csv(std::ostream& os, const RadialGrid& grid, std::span<const Complex> v);
/// r, then re/im pairs for every column.
void write_csv(std::ostream& os, const RadialGrid& grid, const OperatorMatrix& m);

}  // namespace phgen
