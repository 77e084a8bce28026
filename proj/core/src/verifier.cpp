#include "phgen/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

#include "phgen/eigensolve.hpp"
#include "phgen/errors.hpp"
#include "phgen/quadrature.hpp"

namespace phgen {
namespace {

constexpr double kTiny = 1e-300;

double relative(double defect, std::initializer_list<double> terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  if (defect == 0.0) return 0.0;
  return std::abs(defect) / std::max(scale, kTiny);
}

template <class Fn>
double worst_over(const ConstructedModel& model, int probes, Fn&& fn) {
  double worst = 0.0;
  for (double r : probe_points(model.domain, probes)) {
    const double d = fn(r);
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, d);
  }
  return worst;
}

ComplexVector residual_vector(const OperatorMatrix& m, const ComplexVector& v) { return apply(m, v); }

double consistency_defect(const ConstructedModel& model, double r, int mu_power) {
  const Taylor mu = model.mu.expand(r);
  const Taylor F = model.F.expand(r);
  const Taylor G = model.G.expand(r);
  const double m0 = mu.c[0], m1 = mu.derivative(1), m2 = mu.derivative(2);
  const double f0 = F.c[0], f1 = F.derivative(1);
  const double g0 = G.c[0], g2 = G.derivative(2);
  const double ratio_prime = (G / mu).derivative(1);  // (G/mu)'
  const double weight = std::pow(m0, mu_power);
  const double t1 = f0 * f0, t2 = m1 * f0, t3 = m0 * f1;
  const double t4 = 0.5 * m0 * m0 * g2 / g0, t5 = 0.5 * m0 * m2;
  const double t6 = weight * ratio_prime * ratio_prime / (4.0 * g0 * g0);
  return relative(t1 - t2 - t3 - t4 + t5 + t6, {t1, t2, t3, t4, t5, t6});
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* mode_name(GridMode m) { return m == GridMode::kHalfLine ? "half" : "full"; }

double json_number(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

double Threshold::at(double h) const { return p == 0.0 ? c : c * std::pow(h, p); }

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRecord& c) { return c.report_only || c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json jc{{"name", c.name},
                      {"residual", c.residual},
                      {"threshold", c.threshold},
                      {"pass", c.pass},
                      {"report_only", c.report_only},
                      {"rule", {{"c", c.rule.c}, {"p", c.rule.p}}}};
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(std::move(jc));
  }
  return {{"model", r.model},
          {"grid",
           {{"r_min", r.grid.r_min},
            {"r_max", r.grid.r_max},
            {"n", r.grid.n},
            {"h", r.grid.h},
            {"mode", mode_name(r.grid.mode)}}},
          {"checks", checks},
          {"notes", r.notes},
          {"timestamp", r.timestamp}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  try {
    r.model = j.at("model").get<std::string>();
    const auto& g = j.at("grid");
    r.grid.r_min = g.at("r_min").get<double>();
    r.grid.r_max = g.at("r_max").get<double>();
    r.grid.n = g.at("n").get<int>();
    r.grid.h = g.at("h").get<double>();
    r.grid.mode = g.at("mode").get<std::string>() == "half" ? GridMode::kHalfLine : GridMode::kFullLine;
    for (const auto& jc : j.at("checks")) {
      CheckRecord c;
      c.name = jc.at("name").get<std::string>();
      c.residual = json_number(jc.at("residual"));
      c.threshold = json_number(jc.at("threshold"));
      c.pass = jc.at("pass").get<bool>();
      c.report_only = jc.value("report_only", false);
      if (jc.contains("rule")) c.rule = {json_number(jc["rule"].at("c")), json_number(jc["rule"].at("p"))};
      c.detail = jc.value("detail", std::string{});
      r.checks.push_back(std::move(c));
    }
    r.notes = j.value("notes", std::vector<std::string>{});
    r.timestamp = j.value("timestamp", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("report JSON: ") + e.what());
  }
  return r;
}

TestBatch TestBatch::make(const RadialGrid& grid, int k, bool avoid_origin) {
  if (k < 1) throw std::invalid_argument("TestBatch: k must be positive");
  // Gaussian windows cut where they fall below 2e-16, so each vector is
  // smooth to rounding and compactly supported. Narrow compact bumps have
  // derivatives large enough to swamp the O(h^2) behaviour being probed.
  double lo = grid.r_min, hi = grid.r_max;
  if (avoid_origin && lo < 0.0 && hi > 0.0) lo = 0.0;
  const double length = hi - lo;
  const double mid = 0.5 * (lo + hi);
  const double sigma = length / 32.0;
  const double reach = 8.5 * sigma;
  const double span = 0.3 * length;
  TestBatch batch;
  int last = -1;
  for (int j = 0; j < k; ++j) {
    const double target = k == 1 ? mid : mid - 0.5 * span + span * j / (k - 1);
    const int node = static_cast<int>(std::lround((target - grid.nodes.front()) / grid.h));
    if (node == last || node - reach / grid.h <= kInteriorMargin ||
        node + reach / grid.h >= grid.n - 1 - kInteriorMargin) {
      throw std::invalid_argument("TestBatch: grid too coarse for the requested batch");
    }
    last = node;
    const double c = grid.nodes[node];
    ComplexVector v(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double s = (grid.nodes[i] - c) / sigma;
      if (std::abs(s) < 8.5) v[i] = std::polar(std::exp(-0.5 * s * s), 0.7 * (grid.nodes[i] - c));
    }
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    batch.vectors.push_back(std::move(v));
  }
  return batch;
}

double annihilation_of(const ConstructedModel& model, const RadialGrid& grid, const ComplexVector& v) {
  const auto ov = residual_vector(discretize_O(model, grid), v);
  return interior_norm(ov, kInteriorMargin) / interior_norm(v, kInteriorMargin);
}

double check_annihilation(const ConstructedModel& model, const RadialGrid& grid) {
  return annihilation_of(model, grid, sample_psi(model, grid));
}

double check_eigen(const ConstructedModel& model, const RadialGrid& grid) {
  const auto psi = sample_psi(model, grid);
  auto hpsi = apply(discretize_H(model, grid), psi);
  for (int i = 0; i < grid.n; ++i) hpsi[i] -= model.beta * psi[i];
  return interior_norm(hpsi, kInteriorMargin) / interior_norm(psi, kInteriorMargin);
}

double check_intertwining(const ConstructedModel& model, const RadialGrid& grid,
                          const TestBatch& batch) {
  const OperatorMatrix h = discretize_H(model, grid);
  const OperatorMatrix hh = adjoint(h);
  const OperatorMatrix eta = gram(discretize_O(model, grid));
  const double scale = max_row_sum(matmul(eta, h));
  double worst = 0.0;
  for (const auto& v : batch.vectors) {
    const auto lhs = apply(eta, apply(h, v));
    const auto rhs = apply(hh, apply(eta, v));
    worst = std::max(worst, interior_norm(lhs - rhs, kInteriorMargin) / (scale * norm2(v)));
  }
  return worst;
}

double check_eta_factorization(const ConstructedModel& model, const RadialGrid& grid,
                               const TestBatch& batch) {
  const OperatorMatrix factored = gram(discretize_O(model, grid));
  const OperatorMatrix diff = discretize_eta(model, grid, EtaMethod::kDirect) - factored;
  const double scale = max_row_sum(factored);
  double worst = 0.0;
  for (const auto& v : batch.vectors) {
    worst = std::max(worst, interior_norm(apply(diff, v), kInteriorMargin) / (scale * norm2(v)));
  }
  return worst;
}

double check_o_dagger(const ConstructedModel& model, const RadialGrid& grid, const TestBatch& batch) {
  const auto pair = discretize_O_dagger(model, grid);
  const OperatorMatrix diff = pair.formula - pair.adjoint;
  const double scale = max_row_sum(pair.adjoint);
  double worst = 0.0;
  for (const auto& v : batch.vectors) {
    worst = std::max(worst, interior_norm(apply(diff, v), kInteriorMargin) / (scale * norm2(v)));
  }
  return worst;
}

MetricSpectrum analyze_metric(const ConstructedModel& model, const RadialGrid& grid) {
  const OperatorMatrix eta = gram(discretize_O(model, grid));
  MetricSpectrum out;
  out.eta_norm = max_row_sum(eta);
  out.hermiticity_defect = hermiticity_defect(eta);
  out.psd_certified = hermitian_positive_definite(eta, 1e-10 * out.eta_norm);
  const auto pair = nearest_hermitian_eigenpair(eta, 0.0);
  out.min_eigenvalue = pair.value;
  const auto psi = sample_psi(model, grid);
  out.null_overlap = std::abs(inner(pair.vector, psi)) / (norm2(pair.vector) * norm2(psi));
  return out;
}

OrthogonalityResult eta_orthogonality(const OperatorMatrix& h, const OperatorMatrix& eta,
                                      double separation) {
  const auto dec = eigen_decomposition(h);
  const int n = h.size();
  double radius = 0.0;
  for (const auto& z : dec.values) radius = std::max(radius, std::abs(z));
  const double sep = separation * std::max(1.0, radius);

  std::vector<ComplexVector> ev(n);
  std::vector<double> enorm(n);
  for (int j = 0; j < n; ++j) {
    ev[j] = apply(eta, dec.vectors[j]);
    enorm[j] = std::sqrt(std::max(inner(dec.vectors[j], ev[j]).real(), 0.0));
  }
  OrthogonalityResult out;
  for (int i = 0; i < n; ++i) {
    const double self = std::abs(inner(dec.vectors[i], ev[i]));
    out.max_self = std::max(out.max_self, self / (enorm[i] * enorm[i] + kTiny));
    for (int j = 0; j < n; ++j) {
      if (i == j || std::abs(std::conj(dec.values[i]) - dec.values[j]) <= sep) continue;
      const double q = std::abs(inner(dec.vectors[i], ev[j])) / (enorm[i] * enorm[j] + kTiny);
      out.max_off_diagonal = std::max(out.max_off_diagonal, q);
      ++out.pairs_tested;
    }
  }
  return out;
}

OrthogonalityResult check_eta_orthogonality(const ConstructedModel& model, const RadialGrid& grid,
                                            double separation) {
  return eta_orthogonality(discretize_H(model, grid), gram(discretize_O(model, grid)), separation);
}

std::vector<double> probe_points(Domain domain, int count, double lo, double hi) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("probe_points: bad range");
  const bool mirrored = domain != Domain::kHalfLine;
  const int m = mirrored ? count / 2 : count;
  std::vector<double> pos(m);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < m; ++i) pos[i] = std::exp(a + (b - a) * i / (m - 1));
  if (!mirrored) return pos;
  std::vector<double> out;
  out.reserve(2 * m);
  for (int i = m - 1; i >= 0; --i) out.push_back(-pos[i]);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

double check_consistency_ode(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) { return consistency_defect(model, r, 4); });
}

double check_consistency_ode_mu2(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) { return consistency_defect(model, r, 2); });
}

double check_f_formula(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) {
    const Taylor mu = model.mu.expand(r);
    const Taylor G = model.G.expand(r);
    const double g0 = G.c[0];
    const double a = mu.derivative(1) / 2.0;
    const double b = mu.c[0] * G.derivative(1) / (2.0 * g0);
    const double F = model.F.eval(r);
    return relative(F - (a - b), {F, a, b});
  });
}

double check_g_ode(const ConstructedModel& model, int probes) {
  const double lp1 = model.ell_d.value() + 1.0;
  return worst_over(model, probes, [&](double r) {
    const Taylor g = model.g.expand(r);
    const double lhs = g.derivative(1) / g.c[0];
    const double a = 2.0 * lp1 / r;
    const double b = 2.0 * model.spec.f.eval(r);
    return relative(lhs - a + b, {lhs, a, b});
  });
}

double check_psi_log_derivative(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) {
    const Taylor a = model.psi_modulus.expand(r);
    const double mu = model.mu.eval(r);
    const double lhs = -a.derivative(1) / a.c[0];
    const double rhs = model.F.eval(r) / mu;
    const double phase_prime = model.psi_phase.deriv(1, r);
    const double g = model.G.eval(r) / mu;
    return std::max(relative(lhs - rhs, {lhs, rhs}), relative(-phase_prime - g, {phase_prime, g}));
  });
}

double check_w_identity(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) {
    const double w = model.W.eval(r);
    const double alt = -2.0 * model.mu.eval(r) * model.G.deriv(1, r);
    return relative(w - alt, {w, alt});
  });
}

double check_v_identity(const ConstructedModel& model, int probes) {
  return worst_over(model, probes, [&](double r) {
    const Taylor mu = model.mu.expand(r);
    const Taylor F = model.F.expand(r);
    const double G = model.G.eval(r);
    const double t1 = F.c[0] * F.c[0], t2 = G * G, t3 = mu.derivative(1) * F.c[0],
                 t4 = mu.c[0] * F.derivative(1);
    const double v = model.V_tilde_minus_beta.eval(r);
    return relative(t1 - t2 - t3 - t4 - v, {t1, t2, t3, t4, v});
  });
}

double check_v_decomposition(const ConstructedModel& model, int probes) {
  const double l = model.ell_d.value();
  const int d = model.spec.dimension;
  return worst_over(model, probes, [&](double r) {
    const Taylor mu = model.mu.expand(r);
    const Taylor F = model.F.expand(r);
    const Taylor m = model.mass.expand(r);
    const double G = model.G.eval(r);
    const double v = F.c[0] * F.c[0] - G * G - mu.derivative(1) * F.c[0] - mu.c[0] * F.derivative(1);
    const double centrifugal = l * (l + 1.0) / (2.0 * m.c[0] * r * r);
    const double gradient = -m.derivative(1) / (2.0 * m.c[0] * m.c[0]) * (d - 1) / (2.0 * r);
    const double vt = model.V_tilde_minus_beta.eval(r);
    return relative(centrifugal + gradient + v - vt, {centrifugal, gradient, v, vt});
  });
}

double check_normalization(const ConstructedModel& model, double psi_constant, double cutoff,
                           double tol) {
  const auto density = [&model](double r) {
    const double a = model.psi_modulus.eval(r);
    return a * a;
  };
  QuadratureOptions q{tol, 50};
  constexpr double kEdge = 1e-12;
  double total = 0.0;
  switch (model.domain) {
    case Domain::kHalfLine:
      total = adaptive_simpson(density, kEdge, cutoff, q).value;
      break;
    case Domain::kFullLine:
      total = adaptive_simpson(density, -cutoff, cutoff, q).value;
      break;
    case Domain::kPuncturedLine:
      total = adaptive_simpson(density, -cutoff, -kEdge, q).value +
              adaptive_simpson(density, kEdge, cutoff, q).value;
      break;
  }
  return psi_constant * psi_constant * total;
}

ConstructedModel perturb_W(const ConstructedModel& model, double delta) {
  ConstructedModel out = model;
  out.W = model.W + RadialFunction::constant(delta);
  return out;
}

ConstructedModel perturb_F(const ConstructedModel& model, double delta) {
  ConstructedModel out = model;
  out.F = model.F + RadialFunction::constant(delta);
  return out;
}

VerificationReport full_report(const GeneratorSpec& spec, const RadialGrid& grid,
                               const VerifyOptions& options, const ReportThresholds& thresholds) {
  const ConstructedModel model = construct(spec, options.quad);
  return full_report(model, grid, options, thresholds);
}

VerificationReport full_report(const ConstructedModel& base, const RadialGrid& grid,
                               const VerifyOptions& options, const ReportThresholds& thresholds) {
  const ConstructedModel model = options.perturb_W != 0.0 ? perturb_W(base, options.perturb_W) : base;
  VerificationReport report;
  try {
    report.model = fingerprint(model.spec);
  } catch (const SpecError&) {
    report.model = "unfingerprinted";
  }
  report.grid = GridSummary::of(grid);
  report.timestamp = iso_timestamp();
  if (options.perturb_W != 0.0) {
    report.notes.push_back("W perturbed by " + std::to_string(options.perturb_W));
  }

  const double h = grid.h;
  const auto add = [&](std::string name, double residual, Threshold rule, bool report_only = false,
                       std::string detail = {}) {
    CheckRecord c;
    c.name = std::move(name);
    c.residual = residual;
    c.rule = rule;
    c.threshold = rule.at(h);
    c.pass = std::isfinite(residual) && residual <= c.threshold;
    c.report_only = report_only;
    c.detail = std::move(detail);
    report.checks.push_back(std::move(c));
  };

  const TestBatch batch =
      TestBatch::make(grid, options.batch_size, model.domain == Domain::kPuncturedLine);
  add("annihilation", check_annihilation(model, grid), thresholds.annihilation);
  add("eigen", check_eigen(model, grid), thresholds.eigen);
  add("intertwining", check_intertwining(model, grid, batch), thresholds.intertwining);
  add("eta_factorization", check_eta_factorization(model, grid, batch), thresholds.eta_factorization);
  add("o_dagger", check_o_dagger(model, grid, batch), thresholds.o_dagger);

  const MetricSpectrum metric = analyze_metric(model, grid);
  add("eta_hermitian", metric.hermiticity_defect, {0.0, 0.0});
  {
    const double rel = metric.min_eigenvalue / metric.eta_norm;
    double residual = std::max(0.0, -rel);
    // A failed certificate means some eigenvalue lies below -1e-10 ||eta||.
    if (!metric.psd_certified) residual = std::max(residual, std::nextafter(1e-10, 1.0));
    add("eta_psd", residual, {1e-10, 0.0}, false,
        "min eigenvalue / ||eta|| = " + std::to_string(rel));
  }
  add("eta_null_overlap", 1.0 - metric.null_overlap, {0.01, 0.0}, false,
      "overlap = " + std::to_string(metric.null_overlap));

  const int p = options.probe_count;
  add("consistency_ode", check_consistency_ode(model, p), {1e-10, 0.0});
  add("consistency_ode_mu2_weight", check_consistency_ode_mu2(model, p), {1e-10, 0.0}, true,
      "last term weighted by mu^2 instead of mu^4");
  add("f_formula", check_f_formula(model, p), {1e-12, 0.0});
  add("g_ode", check_g_ode(model, p), {1e-10, 0.0});
  add("psi_log_derivative", check_psi_log_derivative(model, p), {1e-10, 0.0});
  add("w_identity", check_w_identity(model, p), {1e-12, 0.0});
  add("v_identity", check_v_identity(model, p), {1e-10, 0.0});
  add("v_decomposition", check_v_decomposition(model, p), {1e-10, 0.0}, true,
      "V from the intertwining constraint plus centrifugal and mass-gradient terms");
  add("eigenvalue_real", std::abs(model.E.imag()), {0.0, 0.0});

  if (grid.n <= options.orthogonality_max_n) {
    const auto orth = check_eta_orthogonality(model, grid);
    add("eta_orthogonality", orth.max_off_diagonal, {1e-6, 0.0}, false,
        std::to_string(orth.pairs_tested) + " separated pairs");
  } else {
    report.notes.push_back("eta_orthogonality skipped: n = " + std::to_string(grid.n) + " > " +
                           std::to_string(options.orthogonality_max_n));
  }
  if (options.psi_constant) {
    const double value =
        check_normalization(model, *options.psi_constant, options.normalization_cutoff);
    add("normalization", std::abs(value - 1.0), {2e-3, 0.0}, true,
        "c^2 * int |psi|^2 = " + std::to_string(value));
  }
  return report;
}

}  // namespace phgen
