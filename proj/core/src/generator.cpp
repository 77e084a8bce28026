#include "phgen/generator.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "phgen/errors.hpp"
#include "phgen/quadrature.hpp"

namespace phgen {
namespace {

using RF = RadialFunction;

// Rethrows the active exception with the failing stage prefixed, same type.
template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("construct[") + name + "]: ";
  try {
    return fn();
  } catch (const AccuracyError& e) {
    throw AccuracyError(prefix + e.what(), e.estimate(), e.error_bound());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const SpecError& e) {
    throw SpecError(prefix + e.what());
  }
}

std::vector<double> mass_probe_points(Domain d) {
  std::vector<double> pts;
  constexpr int kCount = 64;
  const double lo = std::log(1e-2);
  const double hi = std::log(12.0);
  for (int i = 0; i < kCount; ++i) {
    const double r = std::exp(lo + (hi - lo) * i / (kCount - 1));
    pts.push_back(r);
    if (d != Domain::kHalfLine) pts.push_back(-r);
  }
  return pts;
}

}  // namespace

std::string to_string(HalfInt h) {
  if (h.is_integer()) return std::to_string(h.twice() / 2);
  return std::to_string(h.twice()) + "/2";
}

HalfInt effective_ell(int dimension, std::optional<int> ell, std::optional<Parity> parity) {
  if (dimension < 1) throw SpecError("dimension must be >= 1");
  if (dimension == 1) {
    if (ell) throw SpecError("d = 1 takes a parity, not ell");
    if (!parity) throw SpecError("d = 1 requires a parity");
    return *parity == Parity::kEven ? HalfInt::from_int(-1) : HalfInt::from_int(0);
  }
  if (parity) throw SpecError("parity is only meaningful for d = 1");
  if (!ell) throw SpecError("d >= 2 requires ell");
  if (*ell < 0) throw SpecError("ell must be >= 0");
  return HalfInt::from_twice(2 * *ell + dimension - 3);
}

RadialFunction mu_from_mass(const RadialFunction& m) {
  return RF::power(RF::scale(2.0, m), -0.5);
}

RadialFunction build_g(const RadialFunction& f, HalfInt ell_d, double scale,
                       QuadratureOptions quad) {
  if (!(scale > 0.0)) throw SpecError("g scale must be positive");
  const int power = ell_d.twice() + 2;  // 2(l_d + 1)
  RF decay = RF::exp(RF::scale(-2.0, RF::antiderivative(f, 0.0, quad)));
  if (power == 0) return RF::scale(scale, decay);
  return RF::monomial(scale, power) * decay;
}

RadialFunction build_W(const RadialFunction& g, const RadialFunction& mu) {
  return RF::scale(-2.0, mu * RF::derivative(g * mu));
}

RadialFunction build_V_tilde(HalfInt ell_d, const RadialFunction& m, const RadialFunction& mu,
                             const RadialFunction& f, const RadialFunction& g) {
  const double l = ell_d.value();
  const double lp1 = l + 1.0;
  const RF mu_prime = RF::derivative(mu);
  const RF mu2 = mu * mu;
  std::vector<RF> terms;
  if (l * lp1 != 0.0) {
    terms.push_back(RF::product({RF::constant(0.5 * l * lp1), RF::power(m, -1.0),
                                 RF::monomial(1.0, -2.0)}));
  }
  if (lp1 != 0.0) {
    terms.push_back(RF::product({RF::constant(2.0 * lp1), mu, mu_prime, RF::monomial(1.0, -1.0)}));
  }
  terms.push_back(mu2 * (f * f - g * g));
  if (lp1 != 0.0) {
    terms.push_back(RF::product({RF::constant(-2.0 * lp1), f, mu2, RF::monomial(1.0, -1.0)}));
  }
  terms.push_back(RF::product({RF::constant(-2.0), mu_prime, mu, f}));
  terms.push_back(RF::scale(-1.0, mu2 * RF::derivative(f)));
  return RF::sum(std::move(terms));
}

PsiParts build_psi(const RadialFunction& f, const RadialFunction& g, HalfInt ell_d,
                   QuadratureOptions quad) {
  RF decay = RF::exp(RF::scale(-1.0, RF::antiderivative(f, 0.0, quad)));
  const double power = 0.5 * (ell_d.twice() + 2);
  RF modulus = power == 0.0 ? decay : RF::monomial(1.0, power) * decay;
  RF phase = RF::scale(-1.0, RF::antiderivative(g, 0.0, quad));
  return {std::move(modulus), std::move(phase)};
}

std::complex<double> ConstructedModel::psi(double r) const {
  return std::polar(1.0, psi_phase.eval(r)) * psi_modulus.eval(r);
}

ConstructedModel construct(const GeneratorSpec& spec, QuadratureOptions quad) {
  ConstructedModel model{.spec = spec,
                         .ell_d = {},
                         .domain = Domain::kHalfLine,
                         .mass = spec.mass,
                         .mu = spec.mass,
                         .g = spec.mass,
                         .F = spec.mass,
                         .G = spec.mass,
                         .W = spec.mass,
                         .V_tilde_minus_beta = spec.mass,
                         .psi_modulus = spec.mass,
                         .psi_phase = spec.mass,
                         .beta = spec.beta,
                         .E = {spec.beta, 0.0}};

  model.ell_d = stage("effective_ell", [&] { return effective_ell(spec.dimension, spec.ell, spec.parity); });

  model.domain = stage("domain", [&] {
    Domain d = spec.dimension == 1 ? Domain::kFullLine : Domain::kHalfLine;
    d = intersect(d, intersect(spec.mass.domain(), spec.f.domain()));
    if (d == Domain::kFullLine) {
      // A mass vanishing at the origin makes mu singular there.
      bool regular = true;
      try {
        regular = spec.mass.eval(0.0) > 0.0;
      } catch (const DomainError&) {
        regular = false;
      }
      if (!regular) d = Domain::kPuncturedLine;
    }
    for (double r : mass_probe_points(d)) {
      const double m = spec.mass.eval(r);
      if (!(m > 0.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "mass is nonpositive (m = %g) at r = %g", m, r);
        throw DomainError(buf);
      }
    }
    return d;
  });

  model.mu = stage("mu", [&] { return mu_from_mass(spec.mass); });
  model.g = stage("g", [&] { return build_g(spec.f, model.ell_d, spec.g_scale, quad); });
  stage("F,G", [&] {
    const double lp1 = model.ell_d.value() + 1.0;
    RF bracket = lp1 == 0.0 ? spec.f : RF::monomial(-lp1, -1.0) + spec.f;
    model.F = bracket * model.mu;
    model.G = model.g * model.mu;
    return 0;
  });
  model.W = stage("W", [&] { return build_W(model.g, model.mu); });
  model.V_tilde_minus_beta = stage("V_tilde", [&] {
    return build_V_tilde(model.ell_d, spec.mass, model.mu, spec.f, model.g);
  });
  stage("psi", [&] {
    auto parts = build_psi(spec.f, model.g, model.ell_d, quad);
    model.psi_modulus = std::move(parts.modulus);
    model.psi_phase = std::move(parts.phase);
    return 0;
  });
  // Touch every field once at a regular point so failures surface here.
  stage("probe", [&] {
    const double r = 0.5;
    model.W.eval(r);
    model.V_tilde_minus_beta.eval(r);
    model.psi(r);
    return 0;
  });
  return model;
}

double psi_norm(const ConstructedModel& model, double lower, double upper, double tol) {
  const auto density = [&model](double r) {
    const double a = model.psi_modulus.eval(r);
    return a * a;
  };
  return std::sqrt(adaptive_simpson(density, lower, upper, {tol, 50}).value);
}

nlohmann::json to_json(const GeneratorSpec& spec) {
  nlohmann::json j;
  j["dimension"] = spec.dimension;
  if (spec.ell) j["ell"] = *spec.ell;
  if (spec.parity) j["parity"] = *spec.parity == Parity::kEven ? "even" : "odd";
  j["beta"] = spec.beta;
  if (spec.g_scale != 1.0) j["g_scale"] = spec.g_scale;
  auto mass = spec.mass.descriptor();
  auto f = spec.f.descriptor();
  if (!mass || !f) throw SpecError("spec functions are not expressible as descriptors");
  j["mass"] = to_json(*mass);
  j["f"] = to_json(*f);
  return j;
}

GeneratorSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  GeneratorSpec spec;
  try {
    spec.dimension = j.at("dimension").get<int>();
    if (j.contains("ell")) spec.ell = j["ell"].get<int>();
    if (j.contains("parity")) {
      const auto p = j["parity"].get<std::string>();
      if (p == "even") {
        spec.parity = Parity::kEven;
      } else if (p == "odd") {
        spec.parity = Parity::kOdd;
      } else {
        throw SpecError("parity must be \"even\" or \"odd\"");
      }
    }
    spec.beta = j.value("beta", 0.0);
    spec.g_scale = j.value("g_scale", 1.0);
    spec.mass = RadialFunction::from_descriptor(descriptor_from_json(j.at("mass")));
    spec.f = RadialFunction::from_descriptor(descriptor_from_json(j.at("f")));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("spec JSON: ") + e.what());
  }
  effective_ell(spec.dimension, spec.ell, spec.parity);
  return spec;
}

std::string fingerprint(const GeneratorSpec& spec) {
  const std::string canonical = to_json(spec).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace phgen
