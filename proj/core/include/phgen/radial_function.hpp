#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phgen/descriptor.hpp"
#include "phgen/taylor.hpp"

namespace phgen {

/// Open domain of a radial function. Ordered from widest to narrowest.
enum class Domain {
  kFullLine,       // (-inf, inf)
  kPuncturedLine,  // (-inf, 0) U (0, inf)
  kHalfLine,       // (0, inf)
};

Domain intersect(Domain a, Domain b);
bool contains(Domain d, double r);
std::string to_string(Domain d);

/// Tolerances shared by every quadrature-backed node.
struct QuadratureOptions {
  double tol = 1e-12;
  int max_depth = 50;
};

namespace detail {
class Node;
}

/// Immutable real function of one variable with exact derivatives.
///
/// Values are expression trees over a handful of closed-form families.
/// All derivatives come from Taylor propagation through the tree, so the
/// result is analytic up to rounding; only antiderivative nodes touch
/// quadrature. Copies share the tree.
class RadialFunction {
 public:
  // Descriptor families.
  static RadialFunction constant(double c);
  /// coeff * r^power. Integer powers, or half-integers on the half-line.
  static RadialFunction monomial(double coeff, double power);
  /// coeff * exp(-rate r^2).
  static RadialFunction gauss(double coeff, double rate);
  /// coeff * tanh(rate r).
  static RadialFunction scaled_tanh(double coeff, double rate);
  /// coeff * sech(r)^power, power a positive integer.
  static RadialFunction sech_pow(double coeff, int power);
  static RadialFunction sum(std::vector<RadialFunction> terms);
  static RadialFunction product(std::vector<RadialFunction> factors);
  static RadialFunction scale(double c, RadialFunction u);
  /// u(r - s). Requires a full-line argument.
  static RadialFunction shift(double s, RadialFunction u);

  // Derived nodes used by the construction pipeline. Not part of the
  // descriptor grammar.
  static RadialFunction power(RadialFunction base, double p);
  static RadialFunction exp(RadialFunction u);
  static RadialFunction derivative(RadialFunction u);
  /// r -> integral of u from lower to r, by cached adaptive quadrature.
  static RadialFunction antiderivative(RadialFunction u, double lower = 0.0,
                                       QuadratureOptions options = {});

  /// Builds from a descriptor; throws SpecError for malformed input.
  static RadialFunction from_descriptor(const Descriptor& d);

  /// Throws DomainError outside the domain or at a singular point.
  double eval(double r) const;
  double operator()(double r) const { return eval(r); }
  /// Analytic derivative, order 1 or 2.
  double deriv(int order, double r) const;
  /// Full Taylor expansion at r.
  Taylor expand(double r) const;

  Domain domain() const;
  /// Present only when every node in the tree belongs to a descriptor family.
  std::optional<Descriptor> descriptor() const;
  std::string describe() const;

  RadialFunction operator-() const { return scale(-1.0, *this); }

 private:
  explicit RadialFunction(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  static RadialFunction build(const Descriptor& d);

  std::shared_ptr<const detail::Node> node_;
  // Original descriptor when built from one, so rationals survive a round trip.
  std::shared_ptr<const Descriptor> source_;
};

RadialFunction operator+(const RadialFunction& a, const RadialFunction& b);
RadialFunction operator-(const RadialFunction& a, const RadialFunction& b);
RadialFunction operator*(const RadialFunction& a, const RadialFunction& b);
RadialFunction operator*(double s, const RadialFunction& a);

}  // namespace phgen
