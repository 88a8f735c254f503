// Command-line front end: exponents, family, solve, verify, sweep, plotdata.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhstab/harness.hpp"
#include "hhstab/radial_solver.hpp"
#include "hhstab/sweep.hpp"

using namespace hhstab;
using nlohmann::json;

namespace {

struct SubjectOptions {
  double n = 10;
  double alpha = 0;
  SubjectSpec spec{"gelfand_log", {}, {}, {}, {}, {}};

  void attach(CLI::App* app) {
    app->add_option("-N,--dim", n, "dimension N >= 2")->required();
    app->add_option("-a,--alpha", alpha, "weight exponent alpha > -2");
    app->add_option("-k,--kind", spec.kind, "gelfand_log, whole_space_gelfand, power, brezis_vazquez, gelfand_branch")
        ->capture_default_str();
    app->add_option("--g", spec.g, "power exponent g < 0");
    app->add_option("--g-scale", spec.g_scale, "power exponent as g-scale * gamma + g-offset");
    app->add_option("--g-offset", spec.g_offset);
    app->add_option("--q", spec.q, "Brezis-Vazquez exponent");
    app->add_option("--lambda", spec.lambda, "Gelfand branch parameter");
  }

  ProblemParams params() const { return {n, alpha}; }
};

struct TolOptions {
  std::optional<double> residual, growth, key_lemma, truncation, eig_rel;
  std::optional<int> ladder_depth;

  void attach(CLI::App* app) {
    app->add_option("--residual-tol", residual);
    app->add_option("--growth-limit", growth);
    app->add_option("--key-lemma-tol", key_lemma);
    app->add_option("--truncation-tol", truncation);
    app->add_option("--eig-rel-tol", eig_rel);
    app->add_option("--ladder-depth", ladder_depth);
  }

  void apply(SweepTolerances& t) const {
    if (residual) t.residual = *residual;
    if (growth) t.growth = *growth;
    if (key_lemma) t.key_lemma = *key_lemma;
    if (truncation) t.truncation = *truncation;
    if (eig_rel) t.eig_rel = *eig_rel;
    if (ladder_depth) t.ladder_depth = *ladder_depth;
  }

  void apply(HarnessConfig& h) const {
    if (growth) h.growth_limit = *growth;
    if (key_lemma) h.key_lemma_tol = *key_lemma;
    if (truncation) h.truncation_tol = *truncation;
    if (eig_rel) h.protocol.rel_tol = *eig_rel;
    if (ladder_depth) h.ladder_depth = *ladder_depth;
  }
};

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  return &file;
}

json witness_json(const H1Witness& w) {
  return {{"verdict", w.verdict},
          {"analytic", w.analytic ? json(*w.analytic) : json(nullptr)},
          {"integral_1e3", w.integral_1e3},
          {"integral_1e6", w.integral_1e6},
          {"numeric_converges", w.numeric_converges},
          {"basis", w.basis}};
}

int cmd_exponents(const std::vector<double>& ns, const std::vector<double>& alphas, const std::string& out) {
  std::ofstream file;
  std::ostream& os = *open_out(out, file);
  os << "N,alpha,gamma,s_alpha,hardy,p_S,p_JL,regime\n";
  for (double n : ns)
    for (double a : alphas) {
      const auto r = exponent_report({n, a});
      os << format_number(n) << ',' << format_number(a) << ',' << format_number(r.gamma) << ','
         << format_number(r.s_alpha) << ',' << format_number(r.hardy) << ',' << r.p_sobolev.to_string() << ','
         << r.p_jl.to_string() << ',' << to_string(r.regime) << '\n';
    }
  return 0;
}

int cmd_family(const SubjectOptions& so, bool spectra, const std::string& out) {
  const ProblemParams p = so.params();
  const RadialProfile prof = so.spec.build(p);
  const auto h = hardy_comparison(prof);
  json j{{"schema_version", 1},
         {"subject", so.spec.name()},
         {"label", prof.label()},
         {"params", {{"N", p.dim()}, {"alpha", p.alpha()}}},
         {"residual", max_relative_residual(prof, 1e-3, 1.0, 64)},
         {"hardy", {{"sup_weight", h.sup_weight}, {"hardy", h.hardy}, {"stable_by_hardy", h.stable_by_hardy}}},
         {"h1", witness_json(is_h1(prof))}};
  if (spectra) j["spectral"] = is_semistable(prof).to_json();
  std::ofstream file;
  *open_out(out, file) << j.dump(2) << '\n';
  return 0;
}

int cmd_solve(double n, double alpha, std::optional<double> lambda, std::optional<double> center, double coef,
              const SolverConfig& cfg, const std::string& out) {
  const ProblemParams p(n, alpha);
  RadialSolution sol = lambda ? solve_gelfand_branch(p, *lambda, cfg)
                              : shoot(p, Nonlinearity::exponential(coef, 1.0), center.value(), cfg);
  std::ofstream file;
  sol.write_csv(*open_out(out, file));
  if (!out.empty() && out != "-") {
    std::ofstream meta(out + ".json");
    meta << sol.metadata().dump(2) << '\n';
  }
  std::cerr << "u(0)=" << format_number(sol.center_value) << " u(1)=" << format_number(sol.u.back())
            << " residual=" << format_number(sol.stats.max_midpoint_residual) << '\n';
  return 0;
}

int cmd_verify(const SubjectOptions& so, const std::vector<std::string>& checks, const TolOptions& tol,
               const std::string& out) {
  const ProblemParams p = so.params();
  HarnessConfig hc;
  tol.apply(hc);
  const Subject s = make_subject(so.spec.build(p), hc);
  json reports = json::array();
  bool all = true;
  for (const auto& c : checks) {
    VerificationReport rep;
    if (c == "theorem") rep = check_theorem(s, hc);
    else if (c == "lemma25") rep = check_lemma_2_5(s, hc);
    else if (c == "prop26") rep = check_prop_2_6(s, hc);
    else if (c == "key_lemma") rep = check_key_lemma(s, default_key_lemma_functions(p), hc);
    else if (c == "prop24") rep = check_prop_2_4(s, hc);
    else throw CLI::ValidationError("--check", "unknown check " + c);
    all = all && rep.verdict;
    reports.push_back(rep.to_json());
    std::cerr << to_string(rep.target) << ": " << (rep.refused ? "refused" : (rep.verdict ? "pass" : "fail"))
              << " constant=" << format_number(rep.empirical_constant) << '\n';
  }
  json j{{"schema_version", 1},
         {"subject", so.spec.name()},
         {"eligible", s.eligible},
         {"basis", s.basis},
         {"reports", reports}};
  if (s.spectral) j["spectral"] = s.spectral->to_json();
  std::ofstream file;
  *open_out(out, file) << j.dump(2) << '\n';
  return all ? 0 : 1;
}

int cmd_sweep(const std::string& config, const std::string& out_dir, std::optional<unsigned> workers,
              const TolOptions& tol) {
  std::ifstream in(config);
  if (!in) throw std::runtime_error("cannot read " + config);
  SweepConfig cfg = SweepConfig::from_json(json::parse(in));
  tol.apply(cfg.tolerances);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.workers = resolve_workers(workers, cfg);
  cfg.validate();
  const auto rows = run_sweep(cfg);
  write_sweep(cfg, rows);
  int errors = 0;
  for (const auto& r : rows) errors += r.status == "error";
  std::cerr << rows.size() << " rows (" << errors << " errors) written to " << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise estimates for semi-stable radial solutions of -Δu = |x|^α f(u)"};
  app.require_subcommand(1);

  auto* exps = app.add_subcommand("exponents", "exponent table for a grid of (N, alpha)");
  std::vector<double> ns, alphas{0.0};
  std::string out;
  exps->add_option("-N,--dim", ns, "dimensions")->required()->delimiter(',');
  exps->add_option("-a,--alpha", alphas, "weight exponents")->delimiter(',');
  exps->add_option("-o,--out", out, "CSV file (default stdout)");

  auto* fam = app.add_subcommand("family", "residual, Hardy, H1 and spectral report for a closed-form subject");
  SubjectOptions fam_opts;
  bool no_spectra = false;
  fam_opts.attach(fam);
  fam->add_flag("--no-spectra", no_spectra, "skip the eigenvalue protocol");
  fam->add_option("-o,--out", out, "JSON file (default stdout)");

  auto* solve = app.add_subcommand("solve", "shoot -Δu = c|x|^α e^u from the center, or solve the Gelfand branch");
  double sn = 3, sa = 0, coef = 1.0;
  std::optional<double> lambda, center;
  SolverConfig scfg;
  solve->add_option("-N,--dim", sn)->required();
  solve->add_option("-a,--alpha", sa);
  auto* lam_opt = solve->add_option("--lambda", lambda, "Gelfand branch with u(1) = 0");
  auto* m_opt = solve->add_option("--center", center, "center value u(0) for a single shot");
  lam_opt->excludes(m_opt);
  solve->add_option("--coefficient", coef, "c in f(u) = c e^u for --center")->capture_default_str();
  solve->add_option("--eps-start", scfg.eps_start)->capture_default_str();
  solve->add_option("--rtol", scfg.rel_tol)->capture_default_str();
  solve->add_option("--atol", scfg.abs_tol)->capture_default_str();
  solve->add_option("--mesh-points", scfg.mesh_points)->capture_default_str();
  solve->add_option("-o,--out", out, "solution CSV; a .json sidecar holds the metadata");

  auto* verify = app.add_subcommand("verify", "run estimate checks on one subject");
  SubjectOptions ver_opts;
  std::vector<std::string> checks{"theorem", "lemma25", "prop26", "key_lemma", "prop24"};
  TolOptions ver_tol;
  ver_opts.attach(verify);
  verify->add_option("-c,--check", checks, "theorem, lemma25, prop26, key_lemma, prop24")->delimiter(',');
  ver_tol.attach(verify);
  verify->add_option("-o,--out", out, "JSON file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "batch run from a JSON config");
  std::string config, out_dir;
  std::optional<unsigned> workers;
  TolOptions sw_tol;
  sweep->add_option("config", config, "sweep config JSON")->required();
  sweep->add_option("-o,--out-dir", out_dir, "overrides output_dir");
  sweep->add_option("-j,--workers", workers, "worker threads (also HHSTAB_WORKERS)");
  sw_tol.attach(sweep);

  auto* plot = app.add_subcommand("plotdata", "per-radius CSV for external plotting");
  SubjectOptions plot_opts;
  double r_lo = 1e-4;
  int points = 200;
  plot_opts.attach(plot);
  plot->add_option("--r-lo", r_lo)->capture_default_str();
  plot->add_option("--points", points)->capture_default_str();
  plot->add_option("-o,--out", out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exps) return cmd_exponents(ns, alphas, out);
    if (*fam) return cmd_family(fam_opts, !no_spectra, out);
    if (*solve) {
      if (!lambda && !center) throw CLI::RequiredError("--lambda or --center");
      return cmd_solve(sn, sa, lambda, center, coef, scfg, out);
    }
    if (*verify) return cmd_verify(ver_opts, checks, ver_tol, out);
    if (*sweep) return cmd_sweep(config, out_dir, workers, sw_tol);
    if (*plot) {
      std::ofstream file;
      write_plotdata(plot_opts.spec.build(plot_opts.params()), *open_out(out, file), r_lo, points);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
