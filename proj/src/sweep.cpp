#include "hhstab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hhstab/parallel.hpp"

namespace hhstab {

namespace {

const std::vector<std::string> kSubjectKinds{"gelfand_log", "whole_space_gelfand", "power", "brezis_vazquez",
                                             "gelfand_branch"};

std::optional<double> opt_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::size_t check_index(const std::string& c) {
  const auto& k = known_checks();
  return static_cast<std::size_t>(std::find(k.begin(), k.end(), c) - k.begin());
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks{"exponents", "residual", "h1",     "hardy",     "spectral",
                                               "theorem",   "lemma25",  "prop26", "key_lemma", "prop24"};
  return checks;
}

std::string SubjectSpec::name() const {
  std::string s = kind;
  if (kind == "power") {
    if (g)
      s += "(g=" + format_number(*g) + ")";
    else
      s += "(g=" + format_number(g_scale.value_or(1.0)) + "*gamma" +
           (g_offset.value_or(0.0) < 0 ? "" : "+") + format_number(g_offset.value_or(0.0)) + ")";
  } else if (kind == "brezis_vazquez") {
    s += "(q=" + format_number(q.value_or(kNaN)) + ")";
  } else if (kind == "gelfand_branch") {
    s += "(lambda=" + format_number(lambda.value_or(kNaN)) + ")";
  }
  return s;
}

RadialProfile SubjectSpec::build(const ProblemParams& p, const SolverConfig& solver) const {
  if (kind == "gelfand_log") return gelfand_log_family(p);
  if (kind == "whole_space_gelfand") return whole_space_gelfand(p);
  if (kind == "power") {
    const double gv = g ? *g : g_scale.value_or(1.0) * gamma(p) + g_offset.value_or(0.0);
    return power_family(p, gv);
  }
  if (kind == "brezis_vazquez") return brezis_vazquez_family(p, q.value());
  if (kind == "gelfand_branch") return solve_gelfand_branch(p, lambda.value(), solver).as_profile();
  throw std::invalid_argument("unknown subject kind: " + kind);
}

nlohmann::json SubjectSpec::to_json() const {
  nlohmann::json j{{"kind", kind}};
  if (g) j["g"] = *g;
  if (g_scale) j["g_scale"] = *g_scale;
  if (g_offset) j["g_offset"] = *g_offset;
  if (q) j["q"] = *q;
  if (lambda) j["lambda"] = *lambda;
  return j;
}

SubjectSpec SubjectSpec::from_json(const nlohmann::json& j) {
  SubjectSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.g = opt_number(j, "g");
  s.g_scale = opt_number(j, "g_scale");
  s.g_offset = opt_number(j, "g_offset");
  s.q = opt_number(j, "q");
  s.lambda = opt_number(j, "lambda");
  return s;
}

void SweepConfig::validate() const {
  if (n_grid.empty() || alpha_grid.empty()) throw std::invalid_argument("sweep config: grid must be non-empty");
  for (double n : n_grid)
    for (double a : alpha_grid) ProblemParams(n, a);
  if (checks.empty()) throw std::invalid_argument("sweep config: no checks requested");
  for (const auto& c : checks)
    if (check_index(c) == known_checks().size()) throw std::invalid_argument("sweep config: unknown check " + c);
  for (const auto& s : subjects) {
    if (std::find(kSubjectKinds.begin(), kSubjectKinds.end(), s.kind) == kSubjectKinds.end())
      throw std::invalid_argument("sweep config: unknown subject kind " + s.kind);
    if (s.kind == "brezis_vazquez" && !s.q) throw std::invalid_argument("sweep config: brezis_vazquez needs q");
    if (s.kind == "gelfand_branch" && !s.lambda) throw std::invalid_argument("sweep config: gelfand_branch needs lambda");
    if (s.kind == "power" && s.g && (s.g_scale || s.g_offset))
      throw std::invalid_argument("sweep config: power takes g or g_scale/g_offset, not both");
  }
  const bool needs_subject = std::any_of(checks.begin(), checks.end(), [](const std::string& c) { return c != "exponents"; });
  if (needs_subject && subjects.empty()) throw std::invalid_argument("sweep config: subject checks without subjects");
  if (tolerances.ladder_depth < 10) throw std::invalid_argument("sweep config: ladder_depth must be >= 10");
}

nlohmann::json SweepConfig::to_json() const {
  nlohmann::json subj = nlohmann::json::array();
  for (const auto& s : subjects) subj.push_back(s.to_json());
  return {{"schema_version", 1},
          {"grid", {{"N", n_grid}, {"alpha", alpha_grid}}},
          {"subjects", subj},
          {"checks", checks},
          {"tolerances",
           {{"residual", tolerances.residual},
            {"growth", tolerances.growth},
            {"key_lemma", tolerances.key_lemma},
            {"truncation", tolerances.truncation},
            {"eig_rel", tolerances.eig_rel},
            {"ladder_depth", tolerances.ladder_depth}}},
          {"output_dir", output_dir},
          {"workers", workers}};
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("sweep config: unsupported schema_version");
  const auto& grid = j.at("grid");
  c.n_grid = grid.at("N").get<std::vector<double>>();
  c.alpha_grid = grid.at("alpha").get<std::vector<double>>();
  if (j.contains("subjects"))
    for (const auto& s : j.at("subjects")) c.subjects.push_back(SubjectSpec::from_json(s));
  c.checks = j.value("checks", std::vector<std::string>{"exponents"});
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    c.tolerances.residual = t.value("residual", c.tolerances.residual);
    c.tolerances.growth = t.value("growth", c.tolerances.growth);
    c.tolerances.key_lemma = t.value("key_lemma", c.tolerances.key_lemma);
    c.tolerances.truncation = t.value("truncation", c.tolerances.truncation);
    c.tolerances.eig_rel = t.value("eig_rel", c.tolerances.eig_rel);
    c.tolerances.ladder_depth = t.value("ladder_depth", c.tolerances.ladder_depth);
  }
  c.output_dir = j.value("output_dir", c.output_dir);
  c.workers = j.value("workers", 0u);
  return c;
}

unsigned resolve_workers(std::optional<unsigned> flag, const SweepConfig& cfg) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HHSTAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
  }
  return cfg.workers;
}

namespace {

struct Job {
  double n, alpha;
  int subject;  // -1 for the per-grid-point exponents row
};

SweepRow exponents_row(const ProblemParams& p) {
  const ExponentReport r = exponent_report(p);
  std::ostringstream os;
  os << "s_alpha=" << format_number(r.s_alpha) << " hardy=" << format_number(r.hardy)
     << " p_S=" << r.p_sobolev.to_string() << " p_JL=" << r.p_jl.to_string();
  return {p.dim(), p.alpha(), "-", "exponents", "ok", r.gamma, to_string(r.regime), os.str()};
}

SweepRow report_row(const ProblemParams& p, const std::string& subject, const std::string& check,
                    const VerificationReport& rep) {
  return {p.dim(),
          p.alpha(),
          subject,
          check,
          rep.refused ? "refused" : "ok",
          rep.refused ? kNaN : rep.empirical_constant,
          rep.refused ? "refused" : (rep.verdict ? "pass" : "fail"),
          rep.notes};
}

std::vector<SweepRow> run_job(const SweepConfig& cfg, const Job& job) {
  const ProblemParams p(job.n, job.alpha);
  if (job.subject < 0) return {exponents_row(p)};
  const SubjectSpec& spec = cfg.subjects[job.subject];
  const std::string name = spec.name();
  std::vector<std::string> checks;
  for (const auto& c : known_checks())
    if (c != "exponents" && std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end())
      checks.push_back(c);

  std::vector<SweepRow> rows;
  auto error_row = [&](const std::string& check, const std::string& what) {
    rows.push_back({p.dim(), p.alpha(), name, check, "error", kNaN, "error", what});
  };

  std::optional<RadialProfile> prof;
  try {
    prof = spec.build(p);
  } catch (const std::exception& e) {
    for (const auto& c : checks) error_row(c, e.what());
    return rows;
  }

  HarnessConfig hc;
  hc.ladder_depth = cfg.tolerances.ladder_depth;
  hc.growth_limit = cfg.tolerances.growth;
  hc.key_lemma_tol = cfg.tolerances.key_lemma;
  hc.truncation_tol = cfg.tolerances.truncation;
  hc.protocol.rel_tol = cfg.tolerances.eig_rel;
  hc.protocol.workers = 1;
  std::optional<Subject> subject;
  auto get_subject = [&]() -> const Subject& {
    if (!subject) subject = make_subject(*prof, hc);
    return *subject;
  };

  for (const auto& c : checks) {
    try {
      if (c == "residual") {
        const double r = max_relative_residual(*prof, 1e-3, 1.0, 64);
        rows.push_back({p.dim(), p.alpha(), name, c, "ok", r, r <= cfg.tolerances.residual ? "pass" : "fail",
                        "max relative residual on 64 log points in [1e-3, 1]"});
      } else if (c == "h1") {
        const H1Witness w = is_h1(*prof);
        rows.push_back({p.dim(), p.alpha(), name, c, "ok", w.integral_1e6, w.verdict ? "true" : "false", w.basis});
      } else if (c == "hardy") {
        const HardyComparison h = hardy_comparison(*prof);
        rows.push_back({p.dim(), p.alpha(), name, c, "ok", h.sup_weight, h.stable_by_hardy ? "stable" : "not_certified",
                        "hardy=" + format_number(h.hardy)});
      } else if (c == "spectral") {
        const Subject& s = get_subject();
        rows.push_back({p.dim(), p.alpha(), name, c, "ok", s.spectral->margin, to_string(s.spectral->verdict),
                        s.spectral->notes});
      } else if (c == "theorem") {
        rows.push_back(report_row(p, name, c, check_theorem(get_subject(), hc)));
      } else if (c == "lemma25") {
        rows.push_back(report_row(p, name, c, check_lemma_2_5(get_subject(), hc)));
      } else if (c == "prop26") {
        rows.push_back(report_row(p, name, c, check_prop_2_6(get_subject(), hc)));
      } else if (c == "key_lemma") {
        rows.push_back(report_row(p, name, c, check_key_lemma(get_subject(), default_key_lemma_functions(p), hc)));
      } else if (c == "prop24") {
        rows.push_back(report_row(p, name, c, check_prop_2_4(get_subject(), hc)));
      }
    } catch (const std::exception& e) {
      error_row(c, e.what());
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const bool exponents = std::find(cfg.checks.begin(), cfg.checks.end(), "exponents") != cfg.checks.end();
  const bool subject_checks = std::any_of(cfg.checks.begin(), cfg.checks.end(), [](const std::string& c) { return c != "exponents"; });
  std::vector<Job> jobs;
  for (double n : cfg.n_grid)
    for (double a : cfg.alpha_grid) {
      if (exponents) jobs.push_back({n, a, -1});
      if (subject_checks)
        for (int s = 0; s < static_cast<int>(cfg.subjects.size()); ++s) jobs.push_back({n, a, s});
    }

  std::vector<std::vector<SweepRow>> results(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) { results[i] = run_job(cfg, jobs[i]); });

  std::vector<std::pair<std::size_t, SweepRow>> keyed;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    for (auto& row : results[i]) keyed.emplace_back(i, std::move(row));
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
    const Job &a = jobs[x.first], &b = jobs[y.first];
    if (a.n != b.n) return a.n < b.n;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.subject != b.subject) return a.subject < b.subject;
    return check_index(x.second.check) < check_index(y.second.check);
  });
  std::vector<SweepRow> rows;
  rows.reserve(keyed.size());
  for (auto& k : keyed) rows.push_back(std::move(k.second));
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "N,alpha,subject,check,status,value,verdict,detail\r\n";
  for (const auto& r : rows)
    os << format_number(r.n) << ',' << format_number(r.alpha) << ',' << csv_field(r.subject) << ','
       << csv_field(r.check) << ',' << csv_field(r.status) << ',' << format_number(r.value) << ','
       << csv_field(r.verdict) << ',' << csv_field(r.detail) << "\r\n";
  return os.str();
}

nlohmann::json sweep_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json value = std::isfinite(r.value) ? nlohmann::json(r.value) : nlohmann::json(format_number(r.value));
    out.push_back({{"N", r.n},
                   {"alpha", r.alpha},
                   {"subject", r.subject},
                   {"check", r.check},
                   {"status", r.status},
                   {"value", value},
                   {"verdict", r.verdict},
                   {"detail", r.detail}});
  }
  return {{"schema_version", 1}, {"config", cfg.to_json()}, {"rows", out}};
}

void write_sweep(const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "sweep.csv", std::ios::binary);
  csv << sweep_csv(rows);
  std::ofstream js(dir / "sweep.json", std::ios::binary);
  js << sweep_json(cfg, rows).dump(2) << '\n';
  if (!csv || !js) throw std::runtime_error("write_sweep: cannot write into " + cfg.output_dir);
}

}  // namespace hhstab
