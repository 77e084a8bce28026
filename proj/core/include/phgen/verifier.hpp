#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phgen/discrete.hpp"
#include "phgen/generator.hpp"

namespace phgen {

struct GridSummary {
  double r_min = 0.0;
  double r_max = 0.0;
  int n = 0;
  double h = 0.0;
  GridMode mode = GridMode::kHalfLine;

  static GridSummary of(const RadialGrid& g) { return {g.r_min, g.r_max, g.n, g.h, g.mode}; }
};

/// threshold(h) = c * h^p. p = 0 gives a fixed threshold.
struct Threshold {
  double c = 0.0;
  double p = 0.0;

  double at(double h) const;
};

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  Threshold rule;
  bool pass = false;
  bool report_only = false;
  std::string detail;
};

struct VerificationReport {
  std::string model;  // spec fingerprint
  GridSummary grid;
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;
  std::string timestamp;

  /// Every pass/fail check passed; report-only checks are ignored.
  bool passed() const;
  const CheckRecord* find(const std::string& name) const;
};

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

/// k unit-norm complex bumps centred at distinct interior nodes over the
/// middle 30% of the interval, zero on the boundary margins. With
/// avoid_origin a full-line batch keeps to x > 0.
struct TestBatch {
  std::vector<ComplexVector> vectors;

  static TestBatch make(const RadialGrid& grid, int k = 8, bool avoid_origin = false);
};

inline constexpr int kInteriorMargin = 3;

// Grid checks. Norms are taken over interior nodes.
double check_annihilation(const ConstructedModel& model, const RadialGrid& grid);
/// Same ratio with psi replaced by an arbitrary vector (negative control).
double annihilation_of(const ConstructedModel& model, const RadialGrid& grid,
                       const ComplexVector& v);
double check_eigen(const ConstructedModel& model, const RadialGrid& grid);
/// max_k ||(eta H - H^H eta) v_k|| / (||eta H||_inf ||v_k||), factored eta.
double check_intertwining(const ConstructedModel& model, const RadialGrid& grid,
                          const TestBatch& batch);
/// max_k ||(eta_direct - eta_factored) v_k|| / (||eta||_inf ||v_k||).
double check_eta_factorization(const ConstructedModel& model, const RadialGrid& grid,
                               const TestBatch& batch);
/// Formula vs adjoint discretizations of O^dagger, same normalization.
double check_o_dagger(const ConstructedModel& model, const RadialGrid& grid,
                      const TestBatch& batch);

struct MetricSpectrum {
  double min_eigenvalue = 0.0;   // lowest eigenvalue of factored eta
  double eta_norm = 0.0;         // ||eta||_inf
  bool psd_certified = false;    // eta + 1e-10 ||eta|| I is positive definite
  double null_overlap = 0.0;     // |<v, psi>| / (||v|| ||psi||)
  double hermiticity_defect = 0.0;
};
MetricSpectrum analyze_metric(const ConstructedModel& model, const RadialGrid& grid);

struct OrthogonalityResult {
  double max_off_diagonal = 0.0;  // worst normalized eta inner product
  double max_self = 0.0;          // worst |<<v,v>>| / ||v||_eta^2, ideally 1
  int pairs_tested = 0;
};
/// Eigenpairs of the discretized H, eta-inner products of every separated pair.
OrthogonalityResult check_eta_orthogonality(const ConstructedModel& model, const RadialGrid& grid,
                                            double separation = 1e-8);
/// Same measurement for an arbitrary matrix pair (for controls).
OrthogonalityResult eta_orthogonality(const OperatorMatrix& h, const OperatorMatrix& eta,
                                      double separation = 1e-8);

// Analytic checks on a log-spaced probe set; no grid. Each returns the
// worst defect relative to the largest participating term.
std::vector<double> probe_points(Domain domain, int count = 512, double lo = 0.05,
                                 double hi = 8.0);

/// The consistency condition with its last term weighted by mu^4 / (4 G^2),
/// the form that follows from the pipeline.
double check_consistency_ode(const ConstructedModel& model, int probes = 512);
/// The same condition with a mu^2 / (4 G^2) weight on the last term. Agrees
/// with the above only where mu = 1.
double check_consistency_ode_mu2(const ConstructedModel& model, int probes = 512);
/// F = (mu' G - mu G') / (2 G).
double check_f_formula(const ConstructedModel& model, int probes = 512);
/// g'/g = 2(l_d+1)/r - 2f.
double check_g_ode(const ConstructedModel& model, int probes = 512);
/// -(|psi|'/|psi|) = F/mu and -phase' = G/mu.
double check_psi_log_derivative(const ConstructedModel& model, int probes = 512);
/// W = -2 mu G'.
double check_w_identity(const ConstructedModel& model, int probes = 512);
/// V = F^2 - G^2 - mu' F - mu F' equals V~ - beta.
double check_v_identity(const ConstructedModel& model, int probes = 512);
/// V plus the centrifugal and mass-gradient terms of the V~ definition,
/// against V~ - beta.
double check_v_decomposition(const ConstructedModel& model, int probes = 512);

/// c^2 * integral of |psi|^2 over the model's domain (improper limits cut off).
double check_normalization(const ConstructedModel& model, double psi_constant, double cutoff,
                           double tol = 1e-10);

// Corrupted copies for negative controls.
ConstructedModel perturb_W(const ConstructedModel& model, double delta);
ConstructedModel perturb_F(const ConstructedModel& model, double delta);

struct VerifyOptions {
  int batch_size = 8;
  int probe_count = 512;
  double perturb_W = 0.0;
  /// Dense eigen-decomposition for eta-orthogonality; skipped above this n.
  int orthogonality_max_n = 800;
  std::optional<double> psi_constant;
  double normalization_cutoff = 12.0;
  QuadratureOptions quad{};
};

/// Thresholds used by full_report, fitted to h-halving runs over the
/// catalog. The intertwining residual is divided by ||eta H||_inf ~ h^-4, so
/// it falls like h^6.
struct ReportThresholds {
  Threshold annihilation{200.0, 2.0};
  Threshold eigen{5000.0, 2.0};
  Threshold intertwining{0.01, 6.0};
  Threshold eta_factorization{100.0, 4.0};
  Threshold o_dagger{1.0, 3.0};
};

VerificationReport full_report(const GeneratorSpec& spec, const RadialGrid& grid,
                               const VerifyOptions& options = {},
                               const ReportThresholds& thresholds = {});
VerificationReport full_report(const ConstructedModel& model, const RadialGrid& grid,
                               const VerifyOptions& options = {},
                               const ReportThresholds& thresholds = {});

}  // namespace phgen
