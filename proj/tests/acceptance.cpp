// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hhstab/harness.hpp"
#include "hhstab/radial_solver.hpp"
#include "hhstab/sweep.hpp"

using namespace hhstab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string at(const ProblemParams& p) { return "(" + format_number(p.dim()) + "," + format_number(p.alpha()) + ")"; }

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (double a : {-1.9, -1.5, -1.0, 0.0, 1.0, 2.5, 5.0}) worst = std::max(worst, std::abs(gamma({10 + 4 * a, a})));
  o.require(worst <= 1e-12, "critical-line |gamma| = " + num(worst));

  int mismatches = 0;
  double identity = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const ProblemParams p(2.0 + 38.0 * i / 49, -1.95 + 9.95 * j / 49);
      const double g = gamma(p);
      const Regime r = regime(p);
      const bool ok = r == Regime::Critical ? std::abs(g) <= 1e-12
                                            : (r == Regime::Subcritical ? g > 0.0 : g < 0.0);
      mismatches += !ok;
      identity = std::max(identity, std::abs((3 - p.dim() - 2 * s_alpha(p)) - (2 * g - 1)));
    }
  o.require(mismatches == 0, std::to_string(mismatches) + " sign/regime mismatches");
  o.require(identity <= 1e-12, "3-N-2s vs 2gamma-1 off by " + num(identity));
  o.detail = o.pass ? "max critical |gamma| " + num(worst) + ", identity defect " + num(identity) : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  double margin = 0.0, expansion = 0.0;
  int points = 0;
  for (int n = 11; n <= 20; ++n)
    for (double a : {-1.0, 0.0, 1.0}) {
      const ProblemParams p(n, a);
      if (regime(p) != Regime::Supercritical) continue;
      ++points;
      margin = std::max(margin, std::abs(power_stability_margin(p, gamma(p))));
      const double lhs = ((n + a) * (n + a) - (a + 2) * (a + 2 * n - 2)) / 4;
      expansion = std::max(expansion, std::abs(lhs - (n - 2.0) * (n - 2.0) / 4));
    }
  o.require(margin <= 1e-10, "margin at gamma " + num(margin));
  o.require(expansion <= 1e-10, "expansion defect " + num(expansion));
  if (o.pass) o.detail = std::to_string(points) + " points, max |margin| " + num(margin);
  return o;
}

std::vector<RadialProfile> all_families() {
  std::vector<RadialProfile> out;
  for (auto [n, a] : {std::pair{3.0, 0.0}, {10.0, 0.0}, {11.0, 0.0}, {14.0, 1.0}, {15.0, 1.0}, {6.0, -1.0}}) {
    const ProblemParams p(n, a);
    out.push_back(gelfand_log_family(p));
    out.push_back(whole_space_gelfand(p));
    if (regime(p) == Regime::Supercritical) {
      out.push_back(power_family(p, gamma(p)));
      out.push_back(power_family(p, 0.5 * gamma(p)));
      out.push_back(power_family(p, gamma(p) - 0.5));
    }
    out.push_back(power_family(p, -0.3));
  }
  for (double n : {3.0, 10.0, 12.0}) {
    const auto [lo, hi] = brezis_vazquez_range(n);
    for (int i = 1; i <= 4; ++i) out.push_back(brezis_vazquez_family({n, 0}, lo + (hi - lo) * i / 4));
  }
  return out;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0.0;
  const auto fams = all_families();
  for (const auto& prof : fams) {
    const double r = max_relative_residual(prof, 1e-3, 1.0, 64);
    worst = std::max(worst, r);
    o.require(r <= 1e-8, prof.label() + " residual " + num(r));
  }
  if (o.pass) o.detail = std::to_string(fams.size()) + " profiles, max residual " + num(worst);
  return o;
}

// The weight passes through exp((2+alpha) u) with u = -log r, so one rounding of
// log r is amplified by |(2+alpha) log r|; the bound counts ulps of that condition.
Outcome criterion4() {
  Outcome o;
  double worst = 0.0, worst_ulps = 0.0;
  for (double a : {-1.5, -1.0, 0.0, 0.5, 1.0, 2.5, 5.0}) {
    const ProblemParams p(10 + 4 * a, a);
    const auto prof = gelfand_log_family(p);
    const double h = hardy_constant(p);
    for (double r : {1e-6, 1e-3, 0.01, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      const double defect = std::abs(r * r * prof.weight(r) - h) / h;
      const double cond = 1 + std::abs((2 + a) * std::log(r));
      worst = std::max(worst, defect);
      worst_ulps = std::max(worst_ulps, defect / (std::numeric_limits<double>::epsilon() * cond));
    }
  }
  o.require(worst_ulps <= 4.0, "relative defect " + num(worst) + " is " + num(worst_ulps) + " conditioned ulps");
  if (o.pass) o.detail = "max relative defect " + num(worst) + " (" + num(worst_ulps) + " conditioned ulps)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ProblemParams p(3, 0);
  const double exact = 4 * M_PI * M_PI;
  auto lam = [&](int n) {
    return min_eigenvalue(assemble_weight(p, [](double) { return 0.0; }, 0.5, n)).lambda;
  };
  const double e2048 = std::abs(lam(2048) - exact);
  const double e4096 = std::abs(lam(4096) - exact);
  const double rel = e4096 / exact;
  const double ratio = e2048 / e4096;
  o.require(rel <= 1e-3, "relative error " + num(rel));
  o.require(std::abs(ratio - 4.0) <= 0.4, "doubling ratio " + num(ratio));
  o.detail = "relative error " + num(rel) + " at n=4096, doubling ratio " + num(ratio);
  return o;
}

struct Case {
  std::string name;
  RadialProfile profile;
  Verdict expected;
};

std::vector<Case> criterion6_cases() {
  const ProblemParams p10(10, 0), p11(11, 0);
  const double g = gamma(p11);
  return {{"gelfand_log" + at(p10), gelfand_log_family(p10), Verdict::SemiStable},
          {"power(gamma)" + at(p11), power_family(p11, g), Verdict::SemiStable},
          {"power(gamma/2)" + at(p11), power_family(p11, 0.5 * g), Verdict::SemiStable},
          {"power(gamma-0.5)" + at(p11), power_family(p11, g - 0.5), Verdict::Unstable}};
}

Outcome criterion6() {
  Outcome o;
  std::string summary;
  for (const auto& c : criterion6_cases()) {
    const auto v = is_semistable(c.profile);
    bool consistent = v.domain_monotone;
    for (const auto& s : v.samples) {
      if (c.expected == Verdict::SemiStable) consistent &= s.lambda_min >= -s.tol_eig;
      // unstable: negative at every mesh size once the hole is small enough
      if (c.expected == Verdict::Unstable && s.r_min <= 1e-3) consistent &= s.lambda_min < -10 * s.tol_eig;
    }
    o.require(v.verdict == c.expected, c.name + " is " + to_string(v.verdict));
    o.require(consistent, c.name + " varies across the protocol");
    summary += (summary.empty() ? "" : ", ") + c.name + " " + to_string(v.verdict) + " margin " + num(v.margin);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst_trunc = 0.0;
  int checked = 0;
  for (const auto& c : criterion6_cases()) {
    if (c.expected != Verdict::SemiStable) continue;
    const Subject s = make_subject(c.profile);
    const auto rep = check_key_lemma(s, default_key_lemma_functions(c.profile.params()));
    o.require(!rep.refused, c.name + " refused");
    o.require(rep.verdict, c.name + ": " + rep.notes);
    for (std::size_t i = 2; i < rep.truncation.size(); i += 3) worst_trunc = std::max(worst_trunc, rep.truncation[i].rel_error);
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " subjects, worst truncation error at r0/64 " + num(worst_trunc);
  // informational only: the bounded branch converges at the same first order with a larger constant
  const auto branch = make_subject(solve_gelfand_branch({3, 0}, 1.0).as_profile());
  const auto info = check_key_lemma(branch, default_key_lemma_functions({3, 0}));
  double branch_trunc = 0.0;
  for (std::size_t i = 2; i < info.truncation.size(); i += 3) branch_trunc = std::max(branch_trunc, info.truncation[i].rel_error);
  o.detail += " (info: Gelfand branch (3,0) truncation error " + num(branch_trunc) + ")";
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (double a : {0.0, -1.0}) {
    const ProblemParams p(3, a);
    const auto sol = solve_gelfand_branch(p, 1.0);
    const auto rep = derivative_sign_profile(sol);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sol.ur.size(); ++i) worst = std::max(worst, sol.ur[i]);
    o.require(rep.sign_changes.empty(), "sign change at " + at(p));
    o.require(worst < 0.0, "u_r reaches " + num(worst) + " at " + at(p));
    o.require(check_prop_2_4(make_subject(sol.as_profile())).verdict, "prop24 report fails at " + at(p));
    o.detail += (o.detail.empty() ? "" : ", ") + at(p) + " max u_r " + num(worst);
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const ProblemParams p(11, 0);
  const Subject s = make_subject(power_family(p, gamma(p)));
  const double l25 = ladder_spread(check_lemma_2_5(s));
  const double p26 = ladder_spread(check_prop_2_6(s));
  const double thm = ladder_spread(check_theorem(s));
  o.require(l25 <= 1e-8, "lemma25 spread " + num(l25));
  o.require(p26 <= 1e-8, "prop26 spread " + num(p26));
  o.require(thm <= 1e-8, "Theorem_iii spread " + num(thm) + " (ratio is 1 - r^|gamma|, not constant)");
  if (o.pass) o.detail = "spreads " + num(l25) + ", " + num(p26) + ", " + num(thm);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const ProblemParams p10(10, 0), p11(11, 0), p14(14, 1), p15(15, 1);
  for (const auto& prof : {gelfand_log_family(p10), gelfand_log_family(p14), power_family(p11, gamma(p11)),
                           power_family(p11, 0.5 * gamma(p11)), power_family(p15, gamma(p15)),
                           power_family(p15, 0.5 * gamma(p15))})
    o.require(is_h1(prof).verdict, prof.label() + " not H1");
  int bv = 0;
  double saturation = 0.0;
  for (double n : {10.0, 12.0}) {
    const auto [lo, hi] = brezis_vazquez_range(n);
    for (int i = 1; i <= 16; ++i) {
      const double q = lo + (hi - lo) * i / 16;
      o.require(!is_h1(brezis_vazquez_family({n, 0}, q)).verdict, "BV q=" + num(q) + " reported H1");
      ++bv;
    }
    saturation = std::max(saturation, std::abs(-(lo - 2) * (lo + n - 2) - (n - 2) * (n - 2) / 4));
  }
  o.require(saturation <= 1e-10, "endpoint saturation defect " + num(saturation));
  if (o.pass) o.detail = "6 eligible families in H1, " + std::to_string(bv) + " BV profiles outside, saturation " + num(saturation);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion11() {
  Outcome o;
  SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(R"({
    "schema_version": 1,
    "grid": {"N": [3, 10, 11, 15], "alpha": [0, 1]},
    "subjects": [{"kind": "gelfand_log"}, {"kind": "power", "g_scale": 0.5}],
    "checks": ["exponents", "residual", "h1", "hardy", "spectral", "theorem", "lemma25", "prop26"]
  })"));
  const auto dir = std::filesystem::temp_directory_path() / "hhstab_acceptance";
  std::filesystem::remove_all(dir);
  cfg.output_dir = (dir / "first").string();
  cfg.workers = 0;
  write_sweep(cfg, run_sweep(cfg));
  cfg.output_dir = (dir / "second").string();
  cfg.workers = 1;
  write_sweep(cfg, run_sweep(cfg));
  const std::string a = slurp(dir / "first" / "sweep.csv"), b = slurp(dir / "second" / "sweep.csv");
  o.require(!a.empty(), "empty sweep output");
  o.require(a == b, "CSV outputs differ");
  if (o.pass) o.detail = std::to_string(a.size()) + " identical bytes";
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exponent identities", criterion1},
      {"Hardy saturation of the power margin", criterion2},
      {"family residuals", criterion3},
      {"Hardy constant exactness", criterion4},
      {"annulus eigenvalue oracle", criterion5},
      {"stability verdicts", criterion6},
      {"key functional positivity", criterion7},
      {"monotone Gelfand branches", criterion8},
      {"constant ladder ratios for the supercritical power profile", criterion9},
      {"H1 gate", criterion10},
      {"sweep determinism", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
