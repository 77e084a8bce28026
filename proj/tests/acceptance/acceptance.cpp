// Acceptance runner: one pass/fail line per criterion, with the measured
// numbers underneath. `acceptance --criterion N` runs one, no flag runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phgen/catalog.hpp"
#include "phgen/discrete.hpp"
#include "phgen/eigensolve.hpp"
#include "phgen/errors.hpp"
#include "phgen/generator.hpp"
#include "phgen/verifier.hpp"

using namespace phgen;
using phgen::testing::default_grid;
using phgen::testing::observed_order;
using phgen::testing::refinement_grid;

namespace {

const std::vector<double> kRefinement{0.02, 0.01, 0.005};

// Collects sub-results; the criterion passes iff every asserted line passes.
class Criterion {
 public:
  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    va_list ap;
    va_start(ap, fmt);
    line(ok ? "ok  " : "FAIL", fmt, ap);
    va_end(ap);
    pass_ = pass_ && ok;
  }
  void info(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list ap;
    va_start(ap, fmt);
    line("info", fmt, ap);
    va_end(ap);
  }
  bool passed() const { return pass_; }

 private:
  static void line(const char* tag, const char* fmt, va_list ap) {
    std::printf("    %s  ", tag);
    std::vprintf(fmt, ap);
    std::printf("\n");
    std::fflush(stdout);
  }
  bool pass_ = true;
};

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.3e", i ? " " : "", v[i]);
    s += buf;
  }
  return s;
}

ConstructedModel model_of(const std::string& id) { return construct(get_entry(id).spec); }

// 1. closed forms against the pipeline
bool criterion1(Criterion& c) {
  for (const auto& id : example_ids()) {
    const CrosscheckResult r = crosscheck(get_example(id), 512, 1e-12);
    for (const auto& f : r.fields) {
      if (f.asserted) {
        c.check(f.pass(), "%-5s %-19s max rel dev %.3e (r = %.4g)", id.c_str(), f.field.c_str(), f.max_deviation,
                f.worst_r);
      } else {
        c.info("%-5s %-19s max dev %.3e (not asserted)", id.c_str(), f.field.c_str(), f.max_deviation);
      }
    }
  }
  const ConstructedModel m1a = model_of("1A");
  const ConstructedModel m2i = model_of("2i");
  const ConstructedModel m2iv = model_of("2iv");
  const double w1a = m1a.W(1.0), v1a = m1a.V_tilde_minus_beta(1.0);
  const double v2i = m2i.V_tilde_minus_beta(0.0), w2iv = m2iv.W(1.0);
  c.check(std::abs(w1a - 2.0 * std::exp(-1.0)) <= 1e-9 * 2.0 * std::exp(-1.0) && std::abs(w1a - 0.7357589) <= 1e-7,
          "1A W(1) = %.10f (2/e = 0.7357588823)", w1a);
  c.check(std::abs(v1a - (-2.0 - std::exp(-2.0))) <= 1e-9 * 2.2 && std::abs(v1a + 2.1353353) <= 1e-7,
          "1A V~(1) - beta = %.10f (-2 - e^-2 = -2.1353352832)", v1a);
  c.check(std::abs(v2i + 1.5) <= 1e-9 * 1.5, "2i V~(0) - beta = %.12f (-1.5)", v2i);
  const double w2iv_exact = -12.0 * std::cosh(1.0);
  c.check(std::abs(w2iv - w2iv_exact) <= 1e-9 * std::abs(w2iv_exact), "2iv W(1) = %.10f (-12 cosh 1 = %.10f)",
          w2iv, w2iv_exact);
  c.info("2iv W(1): the quoted decimal -18.5179466 differs from -12 cosh 1 by %.3e",
         std::abs(-18.5179466 - w2iv_exact));
  return c.passed();
}

// 2. Example 2i is Hermitian
bool criterion2(Criterion& c) {
  const ConstructedModel m = model_of("2i");
  double worst_w = 0.0;
  for (double x : probe_points(m.domain, 512)) worst_w = std::max(worst_w, std::abs(m.W(x)));
  c.check(worst_w <= 1e-12, "max |W| over 512 probes = %.3e (bound 1e-12)", worst_w);
  const OperatorMatrix h = discretize_H(m, default_grid(m.domain));
  double worst_im = 0.0, worst_re = 0.0;
  int exact_zero = 0;
  for (int i = 0; i < h.size(); ++i) {
    for (int j = 0; j < h.size(); ++j) {
      worst_im = std::max(worst_im, std::abs(h(i, j).imag()));
      worst_re = std::max(worst_re, std::abs(h(i, j).real()));
      exact_zero += h(i, j).imag() == 0.0;
    }
  }
  c.check(worst_im <= 1e-12, "max |Im H_ij| at n = 1600 = %.3e (same bound; max |Re H_ij| = %.3e)", worst_im,
          worst_re);
  c.info("%d of %d entries have Im exactly 0; the rest carry quadrature rounding in W", exact_zero,
         h.size() * h.size());
  return c.passed();
}

// 3. construction identities
bool criterion3(Criterion& c) {
  const auto run = [&](const std::string& label, const ConstructedModel& m) {
    const double ode = check_consistency_ode(m, 512);
    const double ff = check_f_formula(m, 512);
    c.check(ode <= 1e-10 && ff <= 1e-12, "%-20s consistency %.3e  F-formula %.3e", label.c_str(), ode, ff);
  };
  for (const auto& id : all_ids()) run(id, model_of(id));
  std::mt19937_64 rng(20240601);
  for (int k = 0; k < 20; ++k) {
    const GeneratorSpec s = testing::random_spec(rng);
    run("random-" + std::to_string(k) + " d=" + std::to_string(s.dimension), construct(s));
  }
  return c.passed();
}

// 4. second-order convergence of the annihilation and eigen residuals
bool criterion4(Criterion& c) {
  for (const char* id : {"1A", "1B", "2i", "2iii"}) {
    const ConstructedModel m = model_of(id);
    std::vector<double> ann, eig;
    for (double h : kRefinement) {
      const RadialGrid g = refinement_grid(m.domain, h);
      ann.push_back(check_annihilation(m, g));
      eig.push_back(check_eigen(m, g));
    }
    for (auto [name, v] : {std::pair{"annihilation", &ann}, std::pair{"eigen", &eig}}) {
      const double o1 = observed_order((*v)[0], (*v)[1]), o2 = observed_order((*v)[1], (*v)[2]);
      c.check(decreasing(*v) && o1 >= 1.8 && o2 >= 1.8, "%-4s %-12s %s  orders %.2f %.2f", id, name,
              join(*v).c_str(), o1, o2);
    }
  }
  // The same study with the left end moved off the 1/r^2 region.
  for (const char* id : {"1A", "1B"}) {
    const ConstructedModel m = model_of(id);
    std::vector<double> eig;
    for (double h : kRefinement)
      eig.push_back(check_eigen(m, make_grid_with_spacing(0.5, h, static_cast<int>(std::lround(7.5 / h)) + 1,
                                                          GridMode::kHalfLine)));
    c.info("%-4s eigen on [0.5, 8]: %s  orders %.2f %.2f", id, join(eig).c_str(),
           observed_order(eig[0], eig[1]), observed_order(eig[1], eig[2]));
  }
  return c.passed();
}

// 5. metric structure
bool criterion5(Criterion& c) {
  for (const auto& id : all_ids()) {
    const bool asserted = id.rfind("reduction", 0) != 0;
    const ConstructedModel m = model_of(id);
    const RadialGrid g = default_grid(m.domain);
    const MetricSpectrum s = analyze_metric(m, g);
    std::vector<double> dev;
    for (double h : kRefinement) {
      const RadialGrid rg = refinement_grid(m.domain, h);
      dev.push_back(check_eta_factorization(m, rg, TestBatch::make(rg, 8, m.domain == Domain::kPuncturedLine)));
    }
    const bool ok = s.hermiticity_defect == 0.0 && s.psd_certified && s.null_overlap >= 0.99 && decreasing(dev);
    char text[320];
    std::snprintf(text, sizeof text,
                  "%-20s hermiticity %.1e  psd %s (min eig %.2e, ||eta|| %.2e)  null overlap %.6f  "
                  "direct-vs-factored %s",
                  id.c_str(), s.hermiticity_defect, s.psd_certified ? "yes" : "no", s.min_eigenvalue, s.eta_norm,
                  s.null_overlap, join(dev).c_str());
    if (asserted) {
      c.check(ok, "%s", text);
    } else {
      c.info("%s (psi is not normalizable on the line; not asserted)", text);
    }
  }
  return c.passed();
}

// 6. intertwining under refinement, plus the perturbed-W control
bool criterion6(Criterion& c) {
  for (const auto& id : all_ids()) {
    const bool asserted = id.rfind("reduction", 0) != 0;
    const ConstructedModel m = model_of(id);
    const ConstructedModel bad = perturb_W(m, 0.1);
    std::vector<double> res, ratio;
    for (double h : kRefinement) {
      const RadialGrid g = refinement_grid(m.domain, h);
      const TestBatch b = TestBatch::make(g, 8, m.domain == Domain::kPuncturedLine);
      res.push_back(check_intertwining(m, g, b));
      ratio.push_back(check_intertwining(bad, g, b) / res.back());
    }
    if (asserted) {
      c.check(decreasing(res), "%-20s residual %s", id.c_str(), join(res).c_str());
    } else {
      c.info("%-20s residual %s (at the rounding floor; not asserted)", id.c_str(), join(res).c_str());
    }
    c.info("%-20s W + 0.1 / unperturbed under refinement: %s", id.c_str(), join(ratio).c_str());
    if (id == "1A") {
      const RadialGrid g = default_grid(m.domain);
      const TestBatch b = TestBatch::make(g);
      const double base = check_intertwining(m, g, b), perturbed = check_intertwining(bad, g, b);
      c.check(perturbed > 100.0 * base, "%-20s default grid: W + 0.1 gives %.3e vs %.3e (x%.1f)", id.c_str(),
              perturbed, base, perturbed / base);
    }
  }
  return c.passed();
}

// 7. real-or-conjugate-pair spectra
bool criterion7(Criterion& c) {
  {
    const ConstructedModel m = model_of("2i");
    const RadialGrid g = default_grid(m.domain, 400);
    const auto cls = spectrum_classify(qr_eigenvalues(discretize_H(m, g)), 1e-8);
    c.check(cls.unpaired_fraction() == 0.0, "2i n = 400: %zu real, %zu pairs, unpaired fraction %.3g",
            cls.real_set.size(), cls.conjugate_pairs.size(), cls.unpaired_fraction());
    const OrthogonalityResult o = check_eta_orthogonality(m, g);
    c.check(o.max_off_diagonal <= 1e-6, "2i n = 400: eta-orthogonality max off-diagonal %.3e over %d pairs",
            o.max_off_diagonal, o.pairs_tested);
  }
  for (const auto& id : example_ids()) {
    if (id == "2i") continue;
    const ConstructedModel m = model_of(id);
    std::vector<double> fraction;
    for (int n : {100, 200, 400, 800}) {
      const auto eigs = qr_eigenvalues(discretize_H(m, default_grid(m.domain, n)));
      fraction.push_back(spectrum_classify(eigs, 1e-8).unpaired_fraction());
    }
    bool non_increasing = true;
    for (std::size_t i = 1; i < fraction.size(); ++i) non_increasing = non_increasing && fraction[i] <= fraction[i - 1];
    c.check(non_increasing, "%-5s unpaired fraction n = 100/200/400/800: %s", id.c_str(), join(fraction).c_str());
  }
  return c.passed();
}

// 8. normalization with the printed constants
bool criterion8(Criterion& c) {
  for (const auto& id : example_ids()) {
    const CatalogEntry e = get_example(id);
    const double v = check_normalization(construct(e.spec), e.psi_constant, e.cutoff);
    if (id == "2i" || id == "2ii") {
      c.info("%-5s c = %.6g gives %.12f (flagged discrepancy%s)", id.c_str(), e.psi_constant, v,
             id == "2i" ? "; sqrt(pi) = 1.772453850906" : "; 4G/sqrt(pi) = 2.067112988492");
    } else {
      c.check(std::abs(v - 1.0) <= 2e-3, "%-5s c = %.6g gives %.12f", id.c_str(), e.psi_constant, v);
    }
  }
  return c.passed();
}

// 9. eigensolver against independent oracles
bool criterion9(Criterion& c) {
  std::mt19937_64 rng(777);
  double worst = 0.0;
  int worst_n = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 8;
    const OperatorMatrix a = testing::random_matrix(n, rng, k % 5 == 0);
    const double d = testing::set_distance(qr_eigenvalues(a),
                                           testing::polynomial_roots(testing::characteristic_polynomial(a)));
    if (d > worst) {
      worst = d;
      worst_n = n;
    }
  }
  c.check(worst <= 1e-8, "50 random matrices, n = 1..8: worst set distance %.3e (n = %d)", worst, worst_n);
  for (const auto& id : all_ids()) {
    const ConstructedModel m = model_of(id);
    const OperatorMatrix h = discretize_H(m, default_grid(m.domain, 400));
    Complex tr = 0.0, sum = 0.0;
    for (int i = 0; i < h.size(); ++i) tr += h(i, i);
    for (const auto& e : qr_eigenvalues(h)) sum += e;
    const double bound = 1e-8 * h.size() * max_row_sum(h);
    c.check(std::abs(sum - tr) <= bound, "%-20s n = 400: |sum lambda - tr H| = %.3e (bound %.3e)", id.c_str(),
            std::abs(sum - tr), bound);
  }
  return c.passed();
}

struct Entry {
  int number;
  const char* title;
  std::function<bool(Criterion&)> run;
};

const std::vector<Entry>& criteria() {
  static const std::vector<Entry> all{
      {1, "catalog closed forms and spot values", criterion1},
      {2, "Example 2i is Hermitian", criterion2},
      {3, "construction identities on catalog and random specs", criterion3},
      {4, "annihilation and eigen residuals converge at order >= 1.8", criterion4},
      {5, "metric Hermitian, PSD, null vector psi, direct form converges", criterion5},
      {6, "intertwining residual decreases; perturbed W is detected", criterion6},
      {7, "spectra real or conjugate-paired; eta-orthogonality", criterion7},
      {8, "normalization with the printed constants", criterion8},
      {9, "eigensolver matches polynomial-root oracle; trace", criterion9},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  bool all_pass = true;
  bool ran = false;
  for (const auto& e : criteria()) {
    if (only != 0 && e.number != only) continue;
    ran = true;
    std::printf("criterion %d: %s\n", e.number, e.title);
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    bool ok = false;
    std::string error;
    try {
      ok = e.run(c);
    } catch (const std::exception& ex) {
      error = ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!error.empty()) std::printf("    FAIL  exception: %s\n", error.c_str());
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", e.number, e.title, secs);
    std::fflush(stdout);
    all_pass = all_pass && ok;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
