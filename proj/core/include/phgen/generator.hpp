#pragma once

// Construction of a non-Hermitian position-dependent-mass radial
// Hamiltonian from a generating function f:
//
//   H = -(1/2m) d^2 + (m'/2m^2) d + V~(r) + i W(r)
//   O = mu d + Z,  Z = F + i G,  mu = (2m)^(-1/2)
//
// with g, F, G, W, V~ and the eigenfunction psi all determined by (d, l, m, f)
// and the eigenvalue E = beta real.

#include <complex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "phgen/radial_function.hpp"

namespace phgen {

/// Exact half-integer, stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(int v) { return HalfInt(2 * v); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  friend constexpr bool operator==(HalfInt, HalfInt) = default;

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

std::string to_string(HalfInt h);

/// 1D substitute for angular momentum: even -> l_d = -1, odd -> l_d = 0.
enum class Parity { kEven, kOdd };

struct GeneratorSpec {
  int dimension = 3;
  std::optional<int> ell;          // d >= 2 only
  std::optional<Parity> parity;    // d == 1 only
  RadialFunction mass = RadialFunction::constant(0.5);
  RadialFunction f = RadialFunction::constant(0.0);
  double beta = 0.0;
  double g_scale = 1.0;            // positive multiplicative constant on g
};

/// l + (d - 3)/2 for d >= 2; -1 (even) or 0 (odd) for d = 1.
/// Throws SpecError when the wrong one of ell / parity is supplied.
HalfInt effective_ell(int dimension, std::optional<int> ell, std::optional<Parity> parity);

/// mu = sqrt(1 / 2m). Evaluation throws DomainError where m <= 0.
RadialFunction mu_from_mass(const RadialFunction& m);

/// g = scale * r^(2(l_d+1)) * exp(-2 int_0^r f).
RadialFunction build_g(const RadialFunction& f, HalfInt ell_d, double scale = 1.0,
                       QuadratureOptions quad = {});

/// W = -2 mu (g mu)'.
RadialFunction build_W(const RadialFunction& g, const RadialFunction& mu);

/// V~ - beta, summed term by term:
///   l_d(l_d+1)/(2 m r^2) + 2 mu mu' (l_d+1)/r + mu^2 (f^2 - g^2)
///   - 2 (l_d+1) f mu^2 / r - 2 mu' mu f - mu^2 f'
RadialFunction build_V_tilde(HalfInt ell_d, const RadialFunction& m, const RadialFunction& mu,
                             const RadialFunction& f, const RadialFunction& g);

struct PsiParts {
  RadialFunction modulus;  // r^(l_d+1) exp(-int_0^r f)
  RadialFunction phase;    // -int_0^r g
};

PsiParts build_psi(const RadialFunction& f, const RadialFunction& g, HalfInt ell_d,
                   QuadratureOptions quad = {});

struct ConstructedModel {
  GeneratorSpec spec;
  HalfInt ell_d;
  Domain domain = Domain::kHalfLine;
  RadialFunction mass;
  RadialFunction mu;
  RadialFunction g;
  RadialFunction F;
  RadialFunction G;
  RadialFunction W;
  RadialFunction V_tilde_minus_beta;
  RadialFunction psi_modulus;
  RadialFunction psi_phase;
  double beta = 0.0;
  std::complex<double> E;

  double V_tilde(double r) const { return V_tilde_minus_beta.eval(r) + beta; }
  /// Unnormalized eigenfunction.
  std::complex<double> psi(double r) const;
};

/// Runs the whole pipeline. Failures are rethrown with the stage named.
ConstructedModel construct(const GeneratorSpec& spec, QuadratureOptions quad = {});

/// L2 norm of psi over [lower, upper].
double psi_norm(const ConstructedModel& model, double lower, double upper, double tol = 1e-10);

nlohmann::json to_json(const GeneratorSpec& spec);
GeneratorSpec spec_from_json(const nlohmann::json& j);
/// Stable 16-hex-digit hash of the canonical spec JSON.
std::string fingerprint(const GeneratorSpec& spec);

}  // namespace phgen
