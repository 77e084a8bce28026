#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phgen/generator.hpp"

namespace phgen {

using ClosedForm = std::function<double(double)>;

/// A worked example: its spec plus closed forms written out by hand.
struct CatalogEntry {
  std::string id;
  std::string title;
  GeneratorSpec spec;
  bool has_closed_forms = true;
  ClosedForm closed_g;
  ClosedForm closed_W;
  ClosedForm closed_V_tilde_minus_beta;
  ClosedForm closed_psi_modulus;
  /// Phase as printed with the example. NaN where the printed form is not real.
  ClosedForm closed_phase;
  /// Printed prefactor of psi; 0 when none is given.
  double psi_constant = 0.0;
  /// Upper limit for improper integrals over psi.
  double cutoff = 12.0;
  /// A corrected W where the printed one disagrees with the construction.
  ClosedForm amended_W;
  std::vector<std::string> notes;
};

const std::vector<std::string>& example_ids();
/// Throws SpecError for an unknown id.
CatalogEntry get_example(std::string_view id);

/// ids "reduction-half-mass" (m = 1/2) and "reduction-unit-mass" (m = 1),
/// both l_d = -1 on the full line, with the given generating function.
std::vector<CatalogEntry> reduction_entries(const RadialFunction& f = RadialFunction::constant(0.0));
/// Examples followed by the reductions.
std::vector<std::string> all_ids();
/// get_example, or a reduction entry with f = 0.
CatalogEntry get_entry(std::string_view id);

struct FieldDeviation {
  std::string field;
  double max_deviation = 0.0;  // relative, or absolute for the phase
  double worst_r = 0.0;
  bool asserted = true;
  double threshold = 1e-9;

  bool pass() const { return !asserted || max_deviation <= threshold; }
};

struct CrosscheckResult {
  std::string id;
  std::vector<FieldDeviation> fields;
  std::optional<double> normalization;  // c^2 * int |psi|^2
  std::vector<std::string> notes;

  bool pass() const;
  const FieldDeviation* find(const std::string& field) const;
};

/// Pipeline output against the closed forms on probe_count log-spaced
/// points. g, W, V~ - beta and |psi| are asserted at 1e-9 relative; the
/// phase is compared against its printed form and reported only.
CrosscheckResult crosscheck(const CatalogEntry& entry, int probe_count = 512,
                            double quad_tol = 1e-12);

/// |a - b| / |b|, or |a| when b = 0.
double relative_deviation(double a, double b);

}  // namespace phgen
