#pragma once

// Serializable description of a radial function built from the named
// families. Grammar: {"family": name, "params": [...], "args": [...]}.
// Params are JSON numbers or rational strings "p/q"; rationals are kept
// verbatim so a descriptor written back out is bit-identical.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace phgen {

struct Param {
  double value = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> ratio;

  Param() = default;
  Param(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  static Param rational(std::int64_t num, std::int64_t den);

  friend bool operator==(const Param& a, const Param& b) {
    return a.ratio == b.ratio && (a.ratio || a.value == b.value);
  }
};

struct Descriptor {
  std::string family;
  std::vector<Param> params;
  std::vector<Descriptor> args;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

nlohmann::json to_json(const Descriptor& d);
/// Checks the grammar only; throws SpecError on malformed records or bad
/// parameters. Family names and arities are checked by
/// RadialFunction::from_descriptor.
Descriptor descriptor_from_json(const nlohmann::json& j);

}  // namespace phgen
