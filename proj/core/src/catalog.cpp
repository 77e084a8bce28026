#include "phgen/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "phgen/errors.hpp"
#include "phgen/quadrature.hpp"
#include "phgen/verifier.hpp"

namespace phgen {
namespace {

using RF = RadialFunction;

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

GeneratorSpec spec_of(int d, std::optional<int> ell, std::optional<Parity> parity, RF mass, RF f) {
  GeneratorSpec s;
  s.dimension = d;
  s.ell = ell;
  s.parity = parity;
  s.mass = std::move(mass);
  s.f = std::move(f);
  return s;
}

// Example 1: m = r^2/2, f = r.
GeneratorSpec example1(int d, std::optional<int> ell, std::optional<Parity> parity) {
  return spec_of(d, ell, parity, RF::monomial(0.5, 2), RF::monomial(1.0, 1));
}

// Example 2: m = 1/(2 cosh^2 r), f = tanh(r)/2.
GeneratorSpec example2(int d, std::optional<int> ell, std::optional<Parity> parity) {
  return spec_of(d, ell, parity, RF::sech_pow(0.5, 2), RF::scaled_tanh(0.5, 1.0));
}

// -int_0^r of an integrand, coded directly against the printed integral.
ClosedForm minus_integral(ClosedForm integrand) {
  return [integrand](double r) {
    return -adaptive_simpson(integrand, 0.0, r, {1e-13, 50}).value;
  };
}

CatalogEntry make_1a() {
  CatalogEntry e;
  e.id = "1A";
  e.title = "m = r^2/2, f = r, d = 3, l = 0";
  e.spec = example1(3, 0, std::nullopt);
  e.closed_g = [](double r) { return r * r * std::exp(-r * r); };
  e.closed_V_tilde_minus_beta = [](double r) {
    const double r2 = r * r;
    return -1.0 / r2 - 2.0 / (r2 * r2) - r2 * std::exp(-2.0 * r2) + 1.0;
  };
  e.closed_W = [](double r) { return -2.0 / r * std::exp(-r * r) + 4.0 * r * std::exp(-r * r); };
  e.closed_psi_modulus = [](double r) { return r * std::exp(-r * r / 2.0); };
  e.closed_phase = [](double r) {
    return -(-r / 2.0 * std::exp(-r * r) + kSqrtPi / 4.0 * std::erf(r));
  };
  e.psi_constant = std::sqrt(4.0 / kSqrtPi);
  e.cutoff = kGaussianCutoff;
  return e;
}

CatalogEntry make_1b() {
  CatalogEntry e;
  e.id = "1B";
  e.title = "m = r^2/2, f = r, d = 3, l = 1";
  e.spec = example1(3, 1, std::nullopt);
  e.closed_g = [](double r) { return std::pow(r, 4) * std::exp(-r * r); };
  e.closed_V_tilde_minus_beta = [](double r) {
    const double r2 = r * r;
    return -3.0 / r2 - 2.0 / (r2 * r2) - std::pow(r, 6) * std::exp(-2.0 * r2) + 1.0;
  };
  e.closed_W = [](double r) { return 2.0 * r * (-3.0 + 2.0 * r * r) * std::exp(-r * r); };
  e.closed_psi_modulus = [](double r) { return r * r * std::exp(-r * r / 2.0); };
  e.closed_phase = [](double r) {
    const double x = std::exp(-r * r);
    return -(-r * r * r / 2.0 * x - 3.0 * r / 4.0 * x + 3.0 * kSqrtPi / 8.0 * std::erf(r));
  };
  e.psi_constant = std::sqrt(8.0 / (3.0 * kSqrtPi));
  e.cutoff = kGaussianCutoff;
  return e;
}

CatalogEntry make_1c() {
  CatalogEntry e;
  e.id = "1C";
  e.title = "m = r^2/2, f = r, d = 2, l = 0";
  e.spec = example1(2, 0, std::nullopt);
  e.closed_g = [](double p) { return p * std::exp(-p * p); };
  e.closed_V_tilde_minus_beta = [](double p) {
    return -1.25 / std::pow(p, 4) - std::exp(-2.0 * p * p) + 1.0;
  };
  e.closed_W = [](double p) { return 4.0 * std::exp(-p * p); };
  e.closed_psi_modulus = [](double p) { return std::sqrt(p) * std::exp(-p * p / 2.0); };
  e.closed_phase = [](double p) { return -(p / 2.0 * std::exp(-p * p)); };
  e.psi_constant = std::sqrt(2.0);
  e.cutoff = kGaussianCutoff;
  return e;
}

CatalogEntry make_1d() {
  CatalogEntry e;
  e.id = "1D";
  e.title = "m = x^2/2, f = x, d = 1, even parity";
  e.spec = example1(1, std::nullopt, Parity::kEven);
  e.closed_g = [](double x) { return std::exp(-x * x); };
  e.closed_V_tilde_minus_beta = [](double x) {
    return 1.0 / (x * x) - std::exp(-2.0 * x * x) / (x * x) + 1.0;
  };
  e.closed_W = [](double x) {
    const double g = std::exp(-x * x);
    return 4.0 * g / x + 2.0 * g / (x * x * x);
  };
  e.closed_psi_modulus = [](double x) { return std::exp(-x * x / 2.0); };
  e.closed_phase = [](double x) { return -(x / 2.0 * kSqrtPi * std::erf(x)); };
  e.psi_constant = std::sqrt(1.0 / kSqrtPi);
  e.cutoff = kGaussianCutoff;
  e.notes.push_back("mass vanishes at x = 0: the model lives on the punctured line, mu = 1/|x|");
  return e;
}

CatalogEntry make_2i() {
  CatalogEntry e;
  e.id = "2i";
  e.title = "m = 1/(2 cosh^2 r), f = tanh(r)/2, d = 1, even parity";
  e.spec = example2(1, std::nullopt, Parity::kEven);
  e.closed_g = [](double x) { return 1.0 / std::cosh(x); };
  e.closed_V_tilde_minus_beta = [](double x) {
    const double c = std::cosh(x);
    return -3.0 * c * c / 4.0 - 0.75;
  };
  e.closed_W = [](double) { return 0.0; };
  e.closed_psi_modulus = [](double x) { return 1.0 / std::sqrt(std::cosh(x)); };
  // atanh(e^x) is real only for x < 0.
  e.closed_phase = [](double x) {
    const double y = std::exp(x);
    return y < 1.0 ? -2.0 * std::atanh(y) : kNaN;
  };
  e.psi_constant = std::sqrt(1.0 / kSqrtPi);
  e.cutoff = kSechCutoff;
  e.notes.push_back("W vanishes identically: the Hamiltonian is Hermitian");
  return e;
}

CatalogEntry make_2ii() {
  CatalogEntry e;
  e.id = "2ii";
  e.title = "m = 1/(2 cosh^2 r), f = tanh(r)/2, d = 2, l = 0";
  e.spec = example2(2, 0, std::nullopt);
  e.closed_g = [](double p) { return p / std::cosh(p); };
  e.closed_V_tilde_minus_beta = [](double p) {
    const double c = std::cosh(p), s = std::sinh(p);
    return -p * p - c * c / (4.0 * p * p) - 0.75 * c * c + c * s / (2.0 * p) + 0.25;
  };
  e.closed_W = [](double p) { return -2.0 * std::cosh(p); };
  e.closed_psi_modulus = [](double p) { return std::sqrt(p / std::cosh(p)); };
  e.closed_phase = minus_integral([](double z) { return z / std::cosh(z); });
  e.psi_constant = std::sqrt(2.0 / kSqrtPi);
  e.cutoff = kSechCutoff;
  return e;
}

CatalogEntry make_2iii() {
  CatalogEntry e;
  e.id = "2iii";
  e.title = "m = 1/(2 cosh^2 r), f = tanh(r)/2, d = 3, l = 0";
  e.spec = example2(3, 0, std::nullopt);
  e.closed_g = [](double r) { return r * r / std::cosh(r); };
  e.closed_V_tilde_minus_beta = [](double r) {
    const double c = std::cosh(r), s = std::sinh(r);
    return -std::pow(r, 4) - 0.75 * c * c + c * s / r + 0.25;
  };
  e.closed_W = [](double r) { return -4.0 * std::cosh(r); };
  e.amended_W = [](double r) { return -4.0 * r * std::cosh(r); };
  e.closed_psi_modulus = [](double r) { return r / std::sqrt(std::cosh(r)); };
  e.closed_phase = minus_integral([](double z) { return z * z / std::cosh(z); });
  e.psi_constant = 0.5079;
  e.cutoff = kSechCutoff;
  e.notes.push_back(
      "printed W = -4 cosh r lacks a factor r: g mu = r^2 gives W = -2 mu (g mu)' = -4 r cosh r");
  return e;
}

CatalogEntry make_2iv() {
  CatalogEntry e;
  e.id = "2iv";
  e.title = "m = 1/(2 cosh^2 r), f = tanh(r)/2, d = 3, l = 2";
  e.spec = example2(3, 2, std::nullopt);
  e.closed_g = [](double r) { return std::pow(r, 6) / std::cosh(r); };
  e.closed_V_tilde_minus_beta = [](double r) {
    const double c = std::cosh(r);
    return -std::pow(r, 12) - 0.75 * c * c + 3.0 * std::sinh(2.0 * r) / (2.0 * r) +
           6.0 * c * c / (r * r) + 0.25;
  };
  e.closed_W = [](double r) { return -12.0 * std::pow(r, 5) * std::cosh(r); };
  e.closed_psi_modulus = [](double r) { return r * r * r / std::sqrt(std::cosh(r)); };
  e.closed_phase = minus_integral([](double z) { return std::pow(z, 6) / std::cosh(z); });
  e.psi_constant = 0.02636;
  e.cutoff = kSechCutoff;
  return e;
}

CatalogEntry reduction(const char* id, double mass, const RadialFunction& f) {
  CatalogEntry e;
  e.id = id;
  e.title = std::string("l_d = -1, m = ") + (mass == 0.5 ? "1/2" : "1") + ", full line";
  e.spec = spec_of(1, std::nullopt, Parity::kEven, RF::constant(mass), f);
  e.has_closed_forms = false;
  e.cutoff = kGaussianCutoff;
  e.notes.push_back("structural checks only; no closed forms");
  return e;
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids{"1A", "1B", "1C", "1D", "2i", "2ii", "2iii", "2iv"};
  return ids;
}

CatalogEntry get_example(std::string_view id) {
  if (id == "1A") return make_1a();
  if (id == "1B") return make_1b();
  if (id == "1C") return make_1c();
  if (id == "1D") return make_1d();
  if (id == "2i") return make_2i();
  if (id == "2ii") return make_2ii();
  if (id == "2iii") return make_2iii();
  if (id == "2iv") return make_2iv();
  throw SpecError("unknown catalog id: " + std::string(id));
}

std::vector<CatalogEntry> reduction_entries(const RadialFunction& f) {
  return {reduction("reduction-half-mass", 0.5, f), reduction("reduction-unit-mass", 1.0, f)};
}

std::vector<std::string> all_ids() {
  std::vector<std::string> ids = example_ids();
  ids.push_back("reduction-half-mass");
  ids.push_back("reduction-unit-mass");
  return ids;
}

CatalogEntry get_entry(std::string_view id) {
  for (auto& e : reduction_entries())
    if (e.id == id) return e;
  return get_example(id);
}

double relative_deviation(double a, double b) {
  if (b == 0.0) return std::abs(a);
  return std::abs(a - b) / std::abs(b);
}

bool CrosscheckResult::pass() const {
  return std::all_of(fields.begin(), fields.end(), [](const FieldDeviation& f) { return f.pass(); });
}

const FieldDeviation* CrosscheckResult::find(const std::string& field) const {
  for (const auto& f : fields)
    if (f.field == field) return &f;
  return nullptr;
}

CrosscheckResult crosscheck(const CatalogEntry& entry, int probe_count, double quad_tol) {
  CrosscheckResult out;
  out.id = entry.id;
  out.notes = entry.notes;
  const ConstructedModel model = construct(entry.spec, {quad_tol, 50});
  const auto probes = probe_points(model.domain, probe_count);

  if (entry.has_closed_forms) {
    const auto compare = [&](const char* name, const RadialFunction& fun, const ClosedForm& closed,
                             bool asserted) {
      FieldDeviation d;
      d.field = name;
      d.asserted = asserted;
      for (double r : probes) {
        const double dev = relative_deviation(fun.eval(r), closed(r));
        if (!(dev <= d.max_deviation)) {
          d.max_deviation = dev;
          d.worst_r = r;
        }
      }
      out.fields.push_back(d);
      return d;
    };
    compare("g", model.g, entry.closed_g, true);
    const auto w = compare("W", model.W, entry.closed_W, true);
    compare("V_tilde_minus_beta", model.V_tilde_minus_beta, entry.closed_V_tilde_minus_beta, true);
    compare("psi_modulus", model.psi_modulus, entry.closed_psi_modulus, true);
    if (entry.amended_W) {
      const auto a = compare("W_amended", model.W, entry.amended_W, false);
      out.notes.push_back("W: printed form deviates by " + format_g(w.max_deviation) +
                          "; amended form deviates by " + format_g(a.max_deviation));
    }

    FieldDeviation phase;
    phase.field = "phase";
    phase.asserted = false;
    int non_real = 0;
    for (double r : probes) {
      const double printed = entry.closed_phase(r);
      if (!std::isfinite(printed)) {
        ++non_real;
        continue;
      }
      const double dev = std::abs(model.psi_phase.eval(r) - printed);
      if (dev > phase.max_deviation) {
        phase.max_deviation = dev;
        phase.worst_r = r;
      }
    }
    if (non_real > 0) {
      phase.max_deviation = std::numeric_limits<double>::infinity();
      out.notes.push_back("phase: printed form is not real at " + std::to_string(non_real) + " of " +
                          std::to_string(probes.size()) + " probes");
    } else if (phase.max_deviation > 1e-9) {
      out.notes.push_back("phase: printed form differs from -int_0^r g by up to " +
                          format_g(phase.max_deviation) + " (at r = " + format_g(phase.worst_r) + ")");
    }
    out.fields.push_back(phase);
  }

  if (entry.psi_constant > 0.0) {
    const double value = check_normalization(model, entry.psi_constant, entry.cutoff);
    out.normalization = value;
    char rounded[32];
    std::snprintf(rounded, sizeof rounded, "%.3f", value);
    std::string note = "normalization: c = " + format_g(entry.psi_constant) + " -> " + rounded +
                       " (c^2 int |psi|^2 = " + format_g(value) + ")";
    if (std::abs(value - 1.0) > 2e-3) note += " (not unit; flagged)";
    out.notes.push_back(note);
  }
  return out;
}

}  // namespace phgen
