#include "phgen/descriptor.hpp"

#include <cmath>
#include <string>

#include "phgen/errors.hpp"

namespace phgen {
namespace {

nlohmann::json param_to_json(const Param& p) {
  if (p.ratio) {
    if (p.ratio->second == 1) return std::to_string(p.ratio->first);
    return std::to_string(p.ratio->first) + "/" + std::to_string(p.ratio->second);
  }
  return p.value;
}

Param param_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Param(j.get<double>());
  if (!j.is_string()) throw SpecError("descriptor param must be a number or \"p/q\" string");
  const auto text = j.get<std::string>();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const auto num = std::stoll(text, &used);
      if (used != text.size()) throw SpecError("bad integer param '" + text + "'");
      return Param::rational(num, 1);
    }
    std::size_t used_n = 0;
    std::size_t used_d = 0;
    const auto num = std::stoll(text.substr(0, slash), &used_n);
    const auto den = std::stoll(text.substr(slash + 1), &used_d);
    if (used_n != slash || used_d != text.size() - slash - 1) {
      throw SpecError("bad rational param '" + text + "'");
    }
    return Param::rational(num, den);
  } catch (const std::logic_error&) {
    throw SpecError("bad rational param '" + text + "'");
  }
}

}  // namespace

Param Param::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw SpecError("rational param with zero denominator");
  Param p(static_cast<double>(num) / static_cast<double>(den));
  p.ratio = std::make_pair(num, den);
  return p;
}

nlohmann::json to_json(const Descriptor& d) {
  nlohmann::json j;
  j["family"] = d.family;
  if (!d.params.empty()) {
    j["params"] = nlohmann::json::array();
    for (const auto& p : d.params) j["params"].push_back(param_to_json(p));
  }
  if (!d.args.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& a : d.args) j["args"].push_back(to_json(a));
  }
  return j;
}

Descriptor descriptor_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw SpecError("descriptor must be an object with a string 'family'");
  }
  Descriptor d;
  d.family = j["family"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_array()) throw SpecError("descriptor 'params' must be an array");
    for (const auto& p : j["params"]) d.params.push_back(param_from_json(p));
  }
  if (j.contains("args")) {
    if (!j["args"].is_array()) throw SpecError("descriptor 'args' must be an array");
    for (const auto& a : j["args"]) d.args.push_back(descriptor_from_json(a));
  }
  for (const auto& p : d.params) {
    if (!std::isfinite(p.value)) throw SpecError("descriptor param is not finite");
  }
  return d;
}

}  // namespace phgen
