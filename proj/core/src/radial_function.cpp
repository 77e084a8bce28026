#include "phgen/radial_function.hpp"

#include <cmath>
#include <sstream>

#include "phgen/errors.hpp"
#include "phgen/quadrature.hpp"

namespace phgen {

Domain intersect(Domain a, Domain b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

bool contains(Domain d, double r) {
  if (!std::isfinite(r)) return false;
  switch (d) {
    case Domain::kFullLine:
      return true;
    case Domain::kPuncturedLine:
      return r != 0.0;
    case Domain::kHalfLine:
      return r > 0.0;
  }
  return false;
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::kFullLine:
      return "full-line";
    case Domain::kPuncturedLine:
      return "punctured-line";
    case Domain::kHalfLine:
      return "half-line";
  }
  return "?";
}

namespace detail {

class Node {
 public:
  virtual ~Node() = default;
  virtual Taylor expand(double r) const = 0;
  virtual Domain domain() const = 0;
  virtual std::optional<Descriptor> descriptor() const = 0;
  virtual std::string describe() const = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool is_integer(double p) { return std::isfinite(p) && std::floor(p) == p; }

class ConstantNode final : public Node {
 public:
  explicit ConstantNode(double c) : c_(c) {}
  Taylor expand(double) const override { return Taylor::constant(c_); }
  Domain domain() const override { return Domain::kFullLine; }
  std::optional<Descriptor> descriptor() const override { return Descriptor{"constant", {c_}, {}}; }
  std::string describe() const override { return num(c_); }

 private:
  double c_;
};

class MonomialNode final : public Node {
 public:
  MonomialNode(double coeff, double power) : coeff_(coeff), power_(power) {
    if (!is_integer(2.0 * power)) throw SpecError("monomial: power must be an integer or half-integer");
  }
  Taylor expand(double r) const override {
    if (power_ < 0.0 && r == 0.0) throw DomainError("monomial: negative power at r = 0");
    Taylor t;
    double falling = 1.0;  // p (p-1) ... (p-k+1) / k!
    for (int k = 0; k <= kTaylorMaxOrder; ++k) {
      if (k > 0) falling *= (power_ - (k - 1)) / k;
      if (falling == 0.0) {
        t.c[k] = 0.0;
        continue;
      }
      t.c[k] = coeff_ * falling * std::pow(r, power_ - k);
    }
    return t;
  }
  Domain domain() const override {
    if (!is_integer(power_)) return Domain::kHalfLine;
    return power_ < 0.0 ? Domain::kPuncturedLine : Domain::kFullLine;
  }
  std::optional<Descriptor> descriptor() const override {
    return Descriptor{"monomial", {coeff_, power_}, {}};
  }
  std::string describe() const override { return num(coeff_) + "*r^" + num(power_); }

 private:
  double coeff_;
  double power_;
};

class GaussNode final : public Node {
 public:
  GaussNode(double coeff, double rate) : coeff_(coeff), rate_(rate) {}
  Taylor expand(double r) const override {
    Taylor u;
    u.c[0] = -rate_ * r * r;
    u.c[1] = -2.0 * rate_ * r;
    u.c[2] = -rate_;
    return coeff_ * phgen::exp(u);
  }
  Domain domain() const override { return Domain::kFullLine; }
  std::optional<Descriptor> descriptor() const override {
    return Descriptor{"gauss", {coeff_, rate_}, {}};
  }
  std::string describe() const override {
    return num(coeff_) + "*exp(-" + num(rate_) + "*r^2)";
  }

 private:
  double coeff_;
  double rate_;
};

class ScaledTanhNode final : public Node {
 public:
  ScaledTanhNode(double coeff, double rate) : coeff_(coeff), rate_(rate) {}
  Taylor expand(double r) const override {
    Taylor u;
    u.c[0] = rate_ * r;
    u.c[1] = rate_;
    return coeff_ * phgen::tanh(u);
  }
  Domain domain() const override { return Domain::kFullLine; }
  std::optional<Descriptor> descriptor() const override {
    return Descriptor{"scaled_tanh", {coeff_, rate_}, {}};
  }
  std::string describe() const override {
    return num(coeff_) + "*tanh(" + num(rate_) + "*r)";
  }

 private:
  double coeff_;
  double rate_;
};

class SechPowNode final : public Node {
 public:
  SechPowNode(double coeff, int power) : coeff_(coeff), power_(power) {
    if (power < 1) throw SpecError("sech_pow: power must be a positive integer");
  }
  Taylor expand(double r) const override {
    return coeff_ * phgen::pow(phgen::cosh(Taylor::variable(r)), -static_cast<double>(power_));
  }
  Domain domain() const override { return Domain::kFullLine; }
  std::optional<Descriptor> descriptor() const override {
    return Descriptor{"sech_pow", {coeff_, static_cast<double>(power_)}, {}};
  }
  std::string describe() const override {
    return num(coeff_) + "*sech(r)^" + std::to_string(power_);
  }

 private:
  double coeff_;
  int power_;
};

Domain combined(const std::vector<NodePtr>& args) {
  Domain d = Domain::kFullLine;
  for (const auto& a : args) d = intersect(d, a->domain());
  return d;
}

std::optional<std::vector<Descriptor>> child_descriptors(const std::vector<NodePtr>& args) {
  std::vector<Descriptor> out;
  for (const auto& a : args) {
    auto d = a->descriptor();
    if (!d) return std::nullopt;
    out.push_back(std::move(*d));
  }
  return out;
}

std::string join(const std::vector<NodePtr>& args, const char* sep) {
  std::string s = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += sep;
    s += args[i]->describe();
  }
  return s + ")";
}

class SumNode final : public Node {
 public:
  explicit SumNode(std::vector<NodePtr> args) : args_(std::move(args)) {}
  Taylor expand(double r) const override {
    Taylor t = Taylor::constant(0.0);
    for (const auto& a : args_) t = t + a->expand(r);
    return t;
  }
  Domain domain() const override { return combined(args_); }
  std::optional<Descriptor> descriptor() const override {
    auto kids = child_descriptors(args_);
    if (!kids) return std::nullopt;
    return Descriptor{"sum", {}, std::move(*kids)};
  }
  std::string describe() const override { return join(args_, " + "); }

 private:
  std::vector<NodePtr> args_;
};

class ProductNode final : public Node {
 public:
  explicit ProductNode(std::vector<NodePtr> args) : args_(std::move(args)) {}
  Taylor expand(double r) const override {
    Taylor t = Taylor::constant(1.0);
    for (const auto& a : args_) t = t * a->expand(r);
    return t;
  }
  Domain domain() const override { return combined(args_); }
  std::optional<Descriptor> descriptor() const override {
    auto kids = child_descriptors(args_);
    if (!kids) return std::nullopt;
    return Descriptor{"product", {}, std::move(*kids)};
  }
  std::string describe() const override { return join(args_, " * "); }

 private:
  std::vector<NodePtr> args_;
};

class ScaleNode final : public Node {
 public:
  ScaleNode(double c, NodePtr u) : c_(c), u_(std::move(u)) {}
  Taylor expand(double r) const override { return c_ * u_->expand(r); }
  Domain domain() const override { return u_->domain(); }
  std::optional<Descriptor> descriptor() const override {
    auto kid = u_->descriptor();
    if (!kid) return std::nullopt;
    return Descriptor{"scale", {c_}, {std::move(*kid)}};
  }
  std::string describe() const override { return num(c_) + "*" + u_->describe(); }

 private:
  double c_;
  NodePtr u_;
};

class ShiftNode final : public Node {
 public:
  ShiftNode(double s, NodePtr u) : s_(s), u_(std::move(u)) {
    if (u_->domain() != Domain::kFullLine) throw SpecError("shift: argument must be full-line");
  }
  Taylor expand(double r) const override { return u_->expand(r - s_); }
  Domain domain() const override { return Domain::kFullLine; }
  std::optional<Descriptor> descriptor() const override {
    auto kid = u_->descriptor();
    if (!kid) return std::nullopt;
    return Descriptor{"shift", {s_}, {std::move(*kid)}};
  }
  std::string describe() const override {
    return u_->describe() + "[r -> r - " + num(s_) + "]";
  }

 private:
  double s_;
  NodePtr u_;
};

class PowerNode final : public Node {
 public:
  PowerNode(NodePtr base, double p) : base_(std::move(base)), p_(p) {}
  Taylor expand(double r) const override {
    Taylor b = base_->expand(r);
    if (b.c[0] == 0.0 && p_ < 0.0) throw DomainError("power: zero base with negative exponent");
    if (b.c[0] < 0.0 && !is_integer(p_)) throw DomainError("power: negative base with fractional exponent");
    return phgen::pow(b, p_);
  }
  Domain domain() const override { return base_->domain(); }
  std::optional<Descriptor> descriptor() const override { return std::nullopt; }
  std::string describe() const override { return base_->describe() + "^" + num(p_); }

 private:
  NodePtr base_;
  double p_;
};

class ExpNode final : public Node {
 public:
  explicit ExpNode(NodePtr u) : u_(std::move(u)) {}
  Taylor expand(double r) const override { return phgen::exp(u_->expand(r)); }
  Domain domain() const override { return u_->domain(); }
  std::optional<Descriptor> descriptor() const override { return std::nullopt; }
  std::string describe() const override { return "exp" + u_->describe(); }

 private:
  NodePtr u_;
};

class DerivativeNode final : public Node {
 public:
  explicit DerivativeNode(NodePtr u) : u_(std::move(u)) {}
  Taylor expand(double r) const override { return differentiate(u_->expand(r)); }
  Domain domain() const override { return u_->domain(); }
  std::optional<Descriptor> descriptor() const override { return std::nullopt; }
  std::string describe() const override { return "d/dr" + u_->describe(); }

 private:
  NodePtr u_;
};

class AntiderivativeNode final : public Node {
 public:
  AntiderivativeNode(NodePtr u, double lower, QuadratureOptions options)
      : u_(std::move(u)),
        lower_(lower),
        cache_([inner = u_](double z) { return inner->expand(z).c[0]; }, lower, options) {
    if (!contains(u_->domain(), lower)) {
      throw DomainError("antiderivative: lower limit outside integrand domain");
    }
  }
  Taylor expand(double r) const override {
    if (u_->domain() != Domain::kFullLine && (r < 0.0) != (lower_ < 0.0) && r != lower_) {
      throw DomainError("antiderivative: integration path crosses a singular point");
    }
    return integrate(u_->expand(r), cache_(r));
  }
  Domain domain() const override { return u_->domain(); }
  std::optional<Descriptor> descriptor() const override { return std::nullopt; }
  std::string describe() const override {
    return "int_" + num(lower_) + "^r" + u_->describe();
  }

 private:
  NodePtr u_;
  double lower_;
  AntiderivativeCache cache_;
};

}  // namespace
}  // namespace detail

namespace {

double param_at(const Descriptor& d, std::size_t i) { return d.params.at(i).value; }

void require_arity(const Descriptor& d, std::size_t params, std::size_t args) {
  if (d.params.size() != params || d.args.size() != args) {
    std::ostringstream msg;
    msg << "descriptor '" << d.family << "': expected " << params << " params and " << args
        << " args";
    throw SpecError(msg.str());
  }
}

}  // namespace

RadialFunction RadialFunction::constant(double c) {
  return RadialFunction(std::make_shared<detail::ConstantNode>(c));
}
RadialFunction RadialFunction::monomial(double coeff, double power) {
  return RadialFunction(std::make_shared<detail::MonomialNode>(coeff, power));
}
RadialFunction RadialFunction::gauss(double coeff, double rate) {
  return RadialFunction(std::make_shared<detail::GaussNode>(coeff, rate));
}
RadialFunction RadialFunction::scaled_tanh(double coeff, double rate) {
  return RadialFunction(std::make_shared<detail::ScaledTanhNode>(coeff, rate));
}
RadialFunction RadialFunction::sech_pow(double coeff, int power) {
  return RadialFunction(std::make_shared<detail::SechPowNode>(coeff, power));
}

RadialFunction RadialFunction::sum(std::vector<RadialFunction> terms) {
  if (terms.empty()) throw SpecError("sum: no terms");
  std::vector<detail::NodePtr> nodes;
  for (auto& t : terms) nodes.push_back(std::move(t.node_));
  return RadialFunction(std::make_shared<detail::SumNode>(std::move(nodes)));
}
RadialFunction RadialFunction::product(std::vector<RadialFunction> factors) {
  if (factors.empty()) throw SpecError("product: no factors");
  std::vector<detail::NodePtr> nodes;
  for (auto& t : factors) nodes.push_back(std::move(t.node_));
  return RadialFunction(std::make_shared<detail::ProductNode>(std::move(nodes)));
}
RadialFunction RadialFunction::scale(double c, RadialFunction u) {
  return RadialFunction(std::make_shared<detail::ScaleNode>(c, std::move(u.node_)));
}
RadialFunction RadialFunction::shift(double s, RadialFunction u) {
  return RadialFunction(std::make_shared<detail::ShiftNode>(s, std::move(u.node_)));
}
RadialFunction RadialFunction::power(RadialFunction base, double p) {
  return RadialFunction(std::make_shared<detail::PowerNode>(std::move(base.node_), p));
}
RadialFunction RadialFunction::exp(RadialFunction u) {
  return RadialFunction(std::make_shared<detail::ExpNode>(std::move(u.node_)));
}
RadialFunction RadialFunction::derivative(RadialFunction u) {
  return RadialFunction(std::make_shared<detail::DerivativeNode>(std::move(u.node_)));
}
RadialFunction RadialFunction::antiderivative(RadialFunction u, double lower,
                                              QuadratureOptions options) {
  return RadialFunction(
      std::make_shared<detail::AntiderivativeNode>(std::move(u.node_), lower, options));
}

RadialFunction RadialFunction::from_descriptor(const Descriptor& d) {
  RadialFunction out = build(d);
  out.source_ = std::make_shared<const Descriptor>(d);
  return out;
}

RadialFunction RadialFunction::build(const Descriptor& d) {
  const auto& f = d.family;
  if (f == "constant") {
    require_arity(d, 1, 0);
    return constant(param_at(d, 0));
  }
  if (f == "monomial") {
    require_arity(d, 2, 0);
    const double p = param_at(d, 1);
    if (!detail::is_integer(p)) throw SpecError("monomial: power must be an integer");
    return monomial(param_at(d, 0), p);
  }
  if (f == "gauss") {
    require_arity(d, 2, 0);
    return gauss(param_at(d, 0), param_at(d, 1));
  }
  if (f == "scaled_tanh") {
    require_arity(d, 2, 0);
    return scaled_tanh(param_at(d, 0), param_at(d, 1));
  }
  if (f == "sech_pow") {
    require_arity(d, 2, 0);
    const double p = param_at(d, 1);
    if (!detail::is_integer(p) || p < 1.0) throw SpecError("sech_pow: power must be a positive integer");
    return sech_pow(param_at(d, 0), static_cast<int>(p));
  }
  if (f == "sum" || f == "product") {
    if (!d.params.empty() || d.args.empty()) throw SpecError(f + ": expects args and no params");
    std::vector<RadialFunction> kids;
    for (const auto& a : d.args) kids.push_back(build(a));
    return f == "sum" ? sum(std::move(kids)) : product(std::move(kids));
  }
  if (f == "scale") {
    require_arity(d, 1, 1);
    return scale(param_at(d, 0), build(d.args[0]));
  }
  if (f == "shift") {
    require_arity(d, 1, 1);
    return shift(param_at(d, 0), build(d.args[0]));
  }
  throw SpecError("unknown function family '" + f + "'");
}

Taylor RadialFunction::expand(double r) const {
  if (!contains(node_->domain(), r)) {
    std::ostringstream msg;
    msg << "r = " << r << " outside " << to_string(node_->domain()) << " domain of "
        << node_->describe();
    throw DomainError(msg.str());
  }
  Taylor t = node_->expand(r);
  if (!std::isfinite(t.c[0])) {
    std::ostringstream msg;
    msg << "non-finite value at r = " << r << " for " << node_->describe();
    throw DomainError(msg.str());
  }
  return t;
}

double RadialFunction::eval(double r) const { return expand(r).c[0]; }

double RadialFunction::deriv(int order, double r) const {
  if (order != 1 && order != 2) throw std::invalid_argument("deriv: order must be 1 or 2");
  return expand(r).derivative(order);
}

Domain RadialFunction::domain() const { return node_->domain(); }
std::optional<Descriptor> RadialFunction::descriptor() const {
  if (source_) return *source_;
  return node_->descriptor();
}
std::string RadialFunction::describe() const { return node_->describe(); }

RadialFunction operator+(const RadialFunction& a, const RadialFunction& b) {
  return RadialFunction::sum({a, b});
}
RadialFunction operator-(const RadialFunction& a, const RadialFunction& b) {
  return RadialFunction::sum({a, -b});
}
RadialFunction operator*(const RadialFunction& a, const RadialFunction& b) {
  return RadialFunction::product({a, b});
}
RadialFunction operator*(double s, const RadialFunction& a) { return RadialFunction::scale(s, a); }

}  // namespace phgen
