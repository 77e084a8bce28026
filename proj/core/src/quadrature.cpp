#include "phgen/quadrature.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "phgen/errors.hpp"

namespace phgen {
namespace {

constexpr int kInitialPanels = 16;

struct SimpsonState {
  const std::function<double(double)>& f;
  double error = 0.0;
  long evaluations = 0;
  bool capped = false;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    const double noise = 64.0 * DBL_EPSILON * (std::abs(left) + std::abs(right));
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise || lm == a || rm == b) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0) {
      capped = true;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  QuadratureOptions options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol must be positive");
  QuadratureResult out;
  if (a == b) return out;
  SimpsonState st{f};
  const double width = (b - a) / kInitialPanels;
  const double panel_tol = options.tol / kInitialPanels;
  double total = 0.0;
  double x0 = a;
  double f0 = st.eval(a);
  for (int p = 0; p < kInitialPanels; ++p) {
    const double x1 = (p + 1 == kInitialPanels) ? b : a + (p + 1) * width;
    const double xm = 0.5 * (x0 + x1);
    const double fm = st.eval(xm);
    const double f1 = st.eval(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += st.refine(x0, x1, f0, fm, f1, whole, panel_tol, options.max_depth);
    x0 = x1;
    f0 = f1;
  }
  out.value = total;
  out.error_bound = st.error;
  out.evaluations = st.evaluations;
  if (st.capped || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "adaptive_simpson: no convergence on [" << a << ", " << b << "] within depth "
        << options.max_depth << " (estimate " << total << ", error bound " << st.error << ")";
    throw AccuracyError(msg.str(), total, st.error);
  }
  return out;
}

double antiderivative(const RadialFunction& fun, double lower, double upper, double tol) {
  return adaptive_simpson([&fun](double r) { return fun.eval(r); }, lower, upper, {tol, 50}).value;
}

double integrate_to_cutoff(const RadialFunction& fun, double lower, double cutoff, double tol) {
  return antiderivative(fun, lower, cutoff, tol);
}

AntiderivativeCache::AntiderivativeCache(std::function<double(double)> integrand, double lower,
                                         QuadratureOptions options, double panel_width)
    : integrand_(std::move(integrand)),
      lower_(lower),
      options_(options),
      width_(panel_width),
      panel_tol_(options.tol * panel_width / 64.0) {
  if (!(panel_width > 0.0)) throw std::invalid_argument("AntiderivativeCache: bad panel width");
}

double AntiderivativeCache::partial(double a, double b) const {
  return adaptive_simpson(integrand_, a, b, {panel_tol_, options_.max_depth}).value;
}

double AntiderivativeCache::cumulative(long k) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& table = k >= 0 ? forward_ : backward_;
  const long target = k >= 0 ? k : -k;
  const double dir = k >= 0 ? 1.0 : -1.0;
  while (static_cast<long>(table.size()) <= target) {
    const long j = static_cast<long>(table.size()) - 1;
    const double a = lower_ + dir * static_cast<double>(j) * width_;
    const double b = lower_ + dir * static_cast<double>(j + 1) * width_;
    table.push_back(table.back() + partial(a, b));
  }
  return table[target];
}

double AntiderivativeCache::operator()(double r) const {
  const double s = (r - lower_) / width_;
  const long k = static_cast<long>(s >= 0.0 ? std::floor(s) : std::ceil(s));
  const double anchor = lower_ + static_cast<double>(k) * width_;
  const double base = cumulative(k);
  if (anchor == r) return base;
  return base + partial(anchor, r);
}

}  // namespace phgen
