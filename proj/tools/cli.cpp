#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phgen/catalog.hpp"
#include "phgen/discrete.hpp"
#include "phgen/eigensolve.hpp"
#include "phgen/errors.hpp"
#include "phgen/generator.hpp"
#include "phgen/verifier.hpp"

namespace phgen::cli {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  std::string spec_path;
  std::string catalog_id;
  std::optional<double> r_min;
  std::optional<double> r_max;
  std::optional<int> n;
  std::string mode;  // "", "half" or "full"
  std::optional<double> beta;
  std::optional<double> tol;
  std::string format;
  std::string out_path;
  double perturb_W = 0.0;
  bool all = false;
  std::string positional_id;
};

void add_source_options(CLI::App* cmd, RunConfig& cfg) {
  auto* spec = cmd->add_option("--spec", cfg.spec_path, "GeneratorSpec JSON file");
  auto* cat = cmd->add_option("--catalog", cfg.catalog_id, "catalog id (see `catalog list`)");
  spec->excludes(cat);
}

void add_grid_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--rmin", cfg.r_min, "left grid end (default 0.05 half-line, -6 full-line)");
  cmd->add_option("--rmax", cfg.r_max, "right grid end (default 8 half-line, 6 full-line)");
  cmd->add_option("-n", cfg.n, "number of grid nodes")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", cfg.mode, "grid mode")->check(CLI::IsMember({"half", "full"}));
  cmd->add_option("--beta", cfg.beta, "eigenvalue shift beta (default 0)");
}

// Subcommands share one RunConfig, so the default format is applied after
// parsing, not here.
void add_output_options(CLI::App* cmd, RunConfig& cfg, const std::string& default_format) {
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_str(default_format);
  cmd->add_option("--out", cfg.out_path, "output file (default stdout)");
}

void add_tol_option(CLI::App* cmd, RunConfig& cfg, const std::string& what) {
  cmd->add_option("--tol", cfg.tol, what)->check(CLI::PositiveNumber);
}

struct Source {
  GeneratorSpec spec;
  std::optional<CatalogEntry> entry;
};

Source load_source(const RunConfig& cfg) {
  Source src;
  if (!cfg.catalog_id.empty()) {
    src.entry = get_entry(cfg.catalog_id);
    src.spec = src.entry->spec;
  } else if (!cfg.spec_path.empty()) {
    std::ifstream in(cfg.spec_path);
    if (!in) throw SpecError("cannot open spec file '" + cfg.spec_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("spec file '" + cfg.spec_path + "': " + e.what());
    }
    src.spec = spec_from_json(j);
  } else {
    throw SpecError("one of --spec or --catalog is required");
  }
  if (cfg.beta) src.spec.beta = *cfg.beta;
  return src;
}

RadialGrid grid_for(const RunConfig& cfg, Domain domain, int default_n) {
  const bool half_domain = domain == Domain::kHalfLine;
  GridMode mode = half_domain ? GridMode::kHalfLine : GridMode::kFullLine;
  if (cfg.mode == "half") {
    if (!half_domain) throw SpecError("--mode half: the model lives on the full line");
    mode = GridMode::kHalfLine;
  } else if (cfg.mode == "full") {
    if (half_domain) throw SpecError("--mode full: the model lives on the half-line");
    mode = GridMode::kFullLine;
  }
  const bool half = mode == GridMode::kHalfLine;
  const double r_min = cfg.r_min.value_or(half ? 0.05 : -6.0);
  const double r_max = cfg.r_max.value_or(half ? 8.0 : 6.0);
  const int n = cfg.n.value_or(default_n);
  try {
    return make_grid(r_min, r_max, n, mode);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

QuadratureOptions quad_for(const RunConfig& cfg) {
  QuadratureOptions q;
  if (cfg.tol) q.tol = *cfg.tol;
  return q;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw SpecError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int cmd_construct(const RunConfig& cfg, std::ostream& out) {
  const Source src = load_source(cfg);
  const ConstructedModel model = construct(src.spec, quad_for(cfg));
  const RadialGrid grid = grid_for(cfg, model.domain, 1600);
  const std::vector<std::string> columns{"r",      "m",      "mu",     "g",       "F",     "G",
                                         "V_tilde", "W",     "psi_re", "psi_im", "psi_abs", "phase"};
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.n);
  for (double r : grid.nodes) {
    const auto psi = model.psi(r);
    rows.push_back({r, model.mass.eval(r), model.mu.eval(r), model.g.eval(r), model.F.eval(r),
                    model.G.eval(r), model.V_tilde(r), model.W.eval(r), psi.real(), psi.imag(),
                    std::abs(psi), model.psi_phase.eval(r)});
  }

  Output sink(cfg.out_path, out);
  const std::string fp = fingerprint(model.spec);
  if (cfg.format == "json") {
    nlohmann::json j{{"fingerprint", fp}, {"beta", model.beta}, {"spec", to_json(model.spec)}};
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::vector<double> col;
      col.reserve(rows.size());
      for (const auto& row : rows) col.push_back(row[c]);
      j["columns"][columns[c]] = col;
    }
    *sink << j.dump(1) << '\n';
  } else {
    *sink << "# fingerprint " << fp << "\n# beta " << num(model.beta) << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) *sink << (c ? "," : "") << columns[c];
    *sink << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) *sink << (c ? "," : "") << num(row[c]);
      *sink << '\n';
    }
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Source src = load_source(cfg);
  VerifyOptions opts;
  opts.quad = quad_for(cfg);
  opts.perturb_W = cfg.perturb_W;
  if (src.entry && src.entry->psi_constant > 0.0) {
    opts.psi_constant = src.entry->psi_constant;
    opts.normalization_cutoff = src.entry->cutoff;
  }
  const ConstructedModel model = construct(src.spec, opts.quad);
  const RadialGrid grid = grid_for(cfg, model.domain, 1600);
  const VerificationReport report = full_report(model, grid, opts);

  Output sink(cfg.out_path, out);
  if (cfg.format == "csv") {
    *sink << "# fingerprint " << report.model << "\n# timestamp " << report.timestamp << '\n';
    for (const auto& note : report.notes) *sink << "# note " << note << '\n';
    *sink << "name,residual,threshold,pass,report_only\n";
    for (const auto& c : report.checks) {
      *sink << c.name << ',' << num(c.residual) << ',' << num(c.threshold) << ',' << c.pass << ','
            << c.report_only << '\n';
    }
  } else {
    *sink << to_json(report).dump(1) << '\n';
  }
  return report.passed() ? kOk : kVerificationFailed;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const Source src = load_source(cfg);
  const ConstructedModel model = construct(src.spec);
  const RadialGrid grid = grid_for(cfg, model.domain, 400);
  if (grid.n > kMaxDenseDimension) {
    throw GuardError("spectrum: n = " + std::to_string(grid.n) + " exceeds the dense limit " +
                     std::to_string(kMaxDenseDimension));
  }
  const auto eigs = qr_eigenvalues(discretize_H(model, grid));
  const auto cls = spectrum_classify(eigs, cfg.tol.value_or(1e-8));

  Output sink(cfg.out_path, out);
  if (cfg.format == "json") {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& e : cls.eigenvalues) values.push_back({e.real(), e.imag()});
    *sink << nlohmann::json{{"fingerprint", fingerprint(model.spec)},
                            {"n", grid.n},
                            {"tol", cls.tol},
                            {"real", cls.real_set.size()},
                            {"conjugate_pairs", cls.conjugate_pairs.size()},
                            {"unpaired", cls.unpaired.size()},
                            {"unpaired_fraction", cls.unpaired_fraction()},
                            {"eigenvalues", values}}
                 .dump(1)
          << '\n';
  } else {
    *sink << "# fingerprint " << fingerprint(model.spec) << "\n# n " << grid.n << "\n# tol "
          << num(cls.tol) << "\n# real " << cls.real_set.size() << "\n# conjugate_pairs "
          << cls.conjugate_pairs.size() << "\n# unpaired " << cls.unpaired.size()
          << "\n# unpaired_fraction " << num(cls.unpaired_fraction()) << '\n';
    write_spectrum_csv(*sink, cls);
  }
  return kOk;
}

int cmd_crosscheck(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> ids;
  if (cfg.all) {
    ids = example_ids();
  } else {
    std::string id = !cfg.positional_id.empty() ? cfg.positional_id : cfg.catalog_id;
    if (id.empty()) throw SpecError("crosscheck: give an id or --all");
    ids.push_back(id);
  }
  std::vector<CrosscheckResult> results;
  for (const auto& id : ids) {
    const CatalogEntry entry = get_entry(id);
    results.push_back(crosscheck(entry, 512, cfg.tol.value_or(1e-12)));
  }

  Output sink(cfg.out_path, out);
  bool all_pass = true;
  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json fields = nlohmann::json::array();
      for (const auto& f : r.fields) {
        fields.push_back({{"field", f.field},
                          {"max_deviation", f.max_deviation},
                          {"worst_r", f.worst_r},
                          {"asserted", f.asserted},
                          {"pass", f.pass()}});
      }
      nlohmann::json jr{{"id", r.id}, {"pass", r.pass()}, {"fields", fields}, {"notes", r.notes}};
      if (r.normalization) jr["normalization"] = *r.normalization;
      arr.push_back(std::move(jr));
      all_pass = all_pass && r.pass();
    }
    *sink << arr.dump(1) << '\n';
  } else {
    *sink << "id,field,max_deviation,worst_r,asserted,pass\n";
    for (const auto& r : results) {
      for (const auto& f : r.fields) {
        *sink << r.id << ',' << f.field << ',' << num(f.max_deviation) << ',' << num(f.worst_r)
              << ',' << f.asserted << ',' << f.pass() << '\n';
      }
      for (const auto& note : r.notes) *sink << "# " << r.id << ": " << note << '\n';
      all_pass = all_pass && r.pass();
    }
  }
  return all_pass ? kOk : kVerificationFailed;
}

int cmd_catalog_list(const RunConfig& cfg, std::ostream& out) {
  Output sink(cfg.out_path, out);
  for (const auto& id : all_ids()) *sink << id << '\t' << get_entry(id).title << '\n';
  return kOk;
}

int cmd_catalog_show(const RunConfig& cfg, std::ostream& out) {
  const CatalogEntry e = get_entry(cfg.positional_id);
  nlohmann::json j{{"id", e.id}, {"title", e.title}, {"spec", to_json(e.spec)}, {"notes", e.notes}};
  if (e.psi_constant > 0.0) j["psi_constant"] = e.psi_constant;
  Output sink(cfg.out_path, out);
  *sink << j.dump(1) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phgen: pseudo-Hermitian position-dependent-mass Hamiltonian toolkit", "phgen"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* construct_cmd = app.add_subcommand("construct", "sample the constructed fields on a grid");
  add_source_options(construct_cmd, cfg);
  add_grid_options(construct_cmd, cfg);
  add_output_options(construct_cmd, cfg, "csv");
  add_tol_option(construct_cmd, cfg, "quadrature tolerance (default 1e-12)");

  auto* verify_cmd = app.add_subcommand("verify", "run every check and write a report");
  add_source_options(verify_cmd, cfg);
  add_grid_options(verify_cmd, cfg);
  add_output_options(verify_cmd, cfg, "json");
  add_tol_option(verify_cmd, cfg, "quadrature tolerance (default 1e-12)");
  verify_cmd->add_option("--perturb-W", cfg.perturb_W, "add a constant to W (negative control)");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of the discretized H");
  add_source_options(spectrum_cmd, cfg);
  add_grid_options(spectrum_cmd, cfg);
  add_output_options(spectrum_cmd, cfg, "csv");
  add_tol_option(spectrum_cmd, cfg, "relative pairing tolerance (default 1e-8)");

  auto* cross_cmd = app.add_subcommand("crosscheck", "compare against the catalog closed forms");
  cross_cmd->add_option("id", cfg.positional_id, "catalog id");
  cross_cmd->add_option("--catalog", cfg.catalog_id, "catalog id");
  cross_cmd->add_flag("--all", cfg.all, "every worked example");
  add_output_options(cross_cmd, cfg, "csv");
  add_tol_option(cross_cmd, cfg, "quadrature tolerance (default 1e-12)");

  auto* catalog_cmd = app.add_subcommand("catalog", "list or show catalog entries");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list entry ids");
  auto* show_cmd = catalog_cmd->add_subcommand("show", "print an entry as JSON");
  show_cmd->add_option("id", cfg.positional_id, "catalog id")->required();
  for (auto* c : {list_cmd, show_cmd}) c->add_option("--out", cfg.out_path, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "phgen: " << e.what() << '\n';
    return kUsage;
  }

  if (cfg.format.empty()) cfg.format = verify_cmd->parsed() ? "json" : "csv";

  try {
    if (construct_cmd->parsed()) return cmd_construct(cfg, out);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out);
    if (cross_cmd->parsed()) return cmd_crosscheck(cfg, out);
    if (list_cmd->parsed()) return cmd_catalog_list(cfg, out);
    if (show_cmd->parsed()) return cmd_catalog_show(cfg, out);
  } catch (const SpecError& e) {
    err << "phgen: " << e.what() << '\n';
    return kUsage;
  } catch (const GuardError& e) {
    err << "phgen: " << e.what() << '\n';
    return kDomain;
  } catch (const DomainError& e) {
    err << "phgen: " << e.what() << '\n';
    return kDomain;
  } catch (const DimensionError& e) {
    err << "phgen: " << e.what() << '\n';
    return kDomain;
  } catch (const ConvergenceError& e) {
    err << "phgen: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const AccuracyError& e) {
    err << "phgen: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "phgen: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace phgen::cli
