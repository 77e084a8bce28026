#pragma once

#include <functional>
#include <mutex>
#include <vector>

#include "phgen/radial_function.hpp"

namespace phgen {

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  long evaluations = 0;
};

/// Adaptive Simpson on [a, b] with absolute tolerance halved at each
/// subdivision. Also accepts a panel once its Richardson delta sits at the
/// rounding floor of the panel sum. b < a integrates backwards.
/// Throws AccuracyError (carrying the best estimate) if any panel reaches
/// the depth cap unconverged.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  QuadratureOptions options = {});

/// Definite integral of fun over [lower, upper] with absolute error <= tol.
double antiderivative(const RadialFunction& fun, double lower, double upper, double tol);

/// Improper integral with the upper limit truncated at cutoff.
double integrate_to_cutoff(const RadialFunction& fun, double lower, double cutoff, double tol);

inline constexpr double kGaussianCutoff = 12.0;
inline constexpr double kSechCutoff = 40.0;

/// Running antiderivative r -> integral from lower to r.
///
/// Integrals are accumulated panel by panel on a fixed lattice anchored at
/// lower, so a value never depends on the order of earlier queries. The
/// absolute error at r is at most tol * (1 + |r - lower| / 64). Thread-safe.
class AntiderivativeCache {
 public:
  AntiderivativeCache(std::function<double(double)> integrand, double lower,
                      QuadratureOptions options = {}, double panel_width = 0.0625);

  double operator()(double r) const;
  double lower() const { return lower_; }

 private:
  double partial(double a, double b) const;
  double cumulative(long k) const;  // integral over [lower, lower + k*width]

  std::function<double(double)> integrand_;
  double lower_;
  QuadratureOptions options_;
  double width_;
  double panel_tol_;
  mutable std::mutex mutex_;
  mutable std::vector<double> forward_{0.0};
  mutable std::vector<double> backward_{0.0};
};

}  // namespace phgen
