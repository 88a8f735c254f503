#include "hhstab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hhstab/functionals.hpp"

namespace hhstab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double envelope(const ProblemParams& p, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("envelope: r must lie in (0, 1]");
  switch (regime(p)) {
    case Regime::Subcritical: return 1.0;
    case Regime::Critical: return std::abs(std::log(r)) + 1.0;
    case Regime::Supercritical: return std::pow(r, gamma(p));
  }
  return 1.0;
}

std::string envelope_name(const ProblemParams& p) {
  switch (regime(p)) {
    case Regime::Subcritical: return "1";
    case Regime::Critical: return "|log r|+1";
    case Regime::Supercritical: return "r^" + format_number(gamma(p));
  }
  return "?";
}

namespace {

double annulus_integral(const RadialProfile& profile, bool with_value, const QuadratureSpec& quad) {
  const double dim = profile.params().dim();
  const QuadResult q = integrate(
      [&](double t) {
        const double ur = profile.u_r(t);
        double v = ur * ur;
        if (with_value) {
          const double u = profile.u(t);
          v += u * u;
        }
        return std::pow(t, dim - 1.0) * v;
      },
      0.5, 1.0, quad);
  return sphere_area(dim).omega_N * q.value;
}

std::vector<double> ladder(const HarnessConfig& cfg) {
  if (cfg.ladder_depth < 3) throw std::invalid_argument("harness: ladder_depth must be >= 3");
  if (!(cfg.r1 > 0.5 && cfg.r1 <= 1.0)) throw std::invalid_argument("harness: r1 must lie in (1/2, 1]");
  std::vector<double> r(static_cast<std::size_t>(cfg.ladder_depth) + 1);
  for (int k = 0; k <= cfg.ladder_depth; ++k) r[k] = std::ldexp(cfg.r1, -k);
  return r;
}

// max over the last three rungs divided by max over the rest.
double growth(const std::vector<LadderSample>& s) {
  const std::size_t n = s.size();
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double& slot = k + 3 < n ? head : tail;
    slot = std::max(slot, s[k].ratio);
  }
  if (tail == 0.0) return 1.0;
  if (head == 0.0) return std::numeric_limits<double>::infinity();
  return tail / head;
}

// Increments of the ratio over the last three rungs do not grow.
bool contracting(const std::vector<LadderSample>& s) {
  const std::size_t n = s.size();
  if (n < 4) return false;
  double scale = 0.0;
  for (const auto& x : s) scale = std::max(scale, std::abs(x.ratio));
  const double slack = 1e-12 * scale;
  auto d = [&](std::size_t k) { return std::abs(s[k].ratio - s[k - 1].ratio); };
  return d(n - 1) <= d(n - 2) + slack && d(n - 2) <= d(n - 3) + slack;
}

bool all_finite(const std::vector<LadderSample>& s) {
  return std::all_of(s.begin(), s.end(), [](const LadderSample& x) { return std::isfinite(x.ratio); });
}

double max_ratio(const std::vector<LadderSample>& s) {
  double m = 0.0;
  for (const auto& x : s) m = std::max(m, x.ratio);
  return m;
}

VerificationReport start(Target t, const Subject& subject) {
  VerificationReport rep;
  rep.target = t;
  rep.subject = subject.profile.label();
  rep.envelope = envelope_name(subject.profile.params());
  if (!subject.eligible) {
    rep.refused = true;
    rep.notes = "refused: " + subject.basis;
  }
  return rep;
}

void trend_verdict(VerificationReport& rep, const HarnessConfig& cfg, bool need_contraction) {
  const double g = growth(rep.samples);
  rep.empirical_constant = max_ratio(rep.samples);
  const bool finite = all_finite(rep.samples) && std::isfinite(rep.empirical_constant);
  const bool settles = !need_contraction || contracting(rep.samples);
  rep.verdict = finite && rep.empirical_constant > 0.0 && g <= cfg.growth_limit && settles;
  std::ostringstream os;
  os << "growth(last3/rest)=" << format_number(g) << " limit=" << format_number(cfg.growth_limit)
     << " (engineering threshold)";
  if (need_contraction) os << "; tail increments " << (settles ? "contracting" : "not contracting");
  rep.notes = os.str();
}

bool trivial(VerificationReport& rep, double norm, const char* what) {
  if (norm > 0.0) return false;
  rep.empirical_constant = 0.0;
  rep.verdict = true;
  rep.notes = std::string("trivial subject: ") + what + " vanishes on the annulus";
  return true;
}

}  // namespace

double annulus_h1_norm(const RadialProfile& profile, const QuadratureSpec& quad) {
  return std::sqrt(annulus_integral(profile, true, quad));
}

double annulus_gradient_norm(const RadialProfile& profile, const QuadratureSpec& quad) {
  return std::sqrt(annulus_integral(profile, false, quad));
}

Subject make_subject(const RadialProfile& profile, const HarnessConfig& cfg) {
  Subject s{profile, std::nullopt, hardy_comparison(profile), is_h1(profile), false, {}};
  if (cfg.run_spectra) s.spectral = is_semistable(profile, cfg.protocol);
  const bool spectral_ok = s.spectral && s.spectral->verdict == Verdict::SemiStable;
  std::ostringstream os;
  if (!s.h1.verdict) {
    os << "not in H^1 (" << s.h1.basis << ")";
  } else if (!s.hardy.stable_by_hardy && !spectral_ok) {
    os << "not shown semi-stable: sup r^2 weight=" << format_number(s.hardy.sup_weight)
       << " > hardy=" << format_number(s.hardy.hardy);
    if (s.spectral) os << ", spectral verdict " << to_string(s.spectral->verdict);
  } else {
    s.eligible = true;
    os << "H^1";
    if (s.hardy.stable_by_hardy) os << ", weight below the Hardy constant (covers all test functions)";
    if (spectral_ok) os << ", radial spectrum nonnegative";
  }
  s.basis = os.str();
  return s;
}

const char* to_string(Target t) {
  switch (t) {
    case Target::Theorem_i: return "Theorem_i";
    case Target::Theorem_ii: return "Theorem_ii";
    case Target::Theorem_iii: return "Theorem_iii";
    case Target::Lemma25: return "Lemma25";
    case Target::Prop26: return "Prop26";
    case Target::KeyLemma: return "KeyLemma";
    case Target::Prop24: return "Prop24";
  }
  return "?";
}

Target theorem_target(const ProblemParams& p) {
  switch (regime(p)) {
    case Regime::Subcritical: return Target::Theorem_i;
    case Regime::Critical: return Target::Theorem_ii;
    case Regime::Supercritical: return Target::Theorem_iii;
  }
  return Target::Theorem_i;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : samples)
    rows.push_back({{"r", s.r}, {"numerator", s.numerator}, {"denominator", s.denominator}, {"ratio", s.ratio}});
  nlohmann::json trunc = nlohmann::json::array();
  for (const auto& s : truncation)
    trunc.push_back(
        {{"r0", s.r0}, {"eps", s.eps}, {"value", s.value}, {"limit", s.limit}, {"rel_error", s.rel_error}});
  return {{"schema_version", 1},
          {"target", to_string(target)},
          {"subject", subject},
          {"empirical_constant", empirical_constant},
          {"envelope", envelope},
          {"norm_used", norm_used},
          {"samples", rows},
          {"truncation", trunc},
          {"verdict", verdict},
          {"refused", refused},
          {"notes", notes}};
}

VerificationReport check_theorem(const Subject& subject, const HarnessConfig& cfg) {
  const auto& prof = subject.profile;
  const ProblemParams& p = prof.params();
  const Target t = theorem_target(p);
  VerificationReport rep = start(t, subject);
  if (rep.refused) return rep;
  rep.norm_used = annulus_h1_norm(prof, cfg.quad);
  if (trivial(rep, rep.norm_used, "u")) return rep;
  for (double r : ladder(cfg)) {
    const double num = std::abs(prof.u(r));
    const double den = envelope(p, r) * rep.norm_used;
    rep.samples.push_back({r, num, den, num / den});
  }
  trend_verdict(rep, cfg, t != Target::Theorem_i);
  rep.notes += "; normalized by the H^1 norm on the annulus 1/2 < r < 1";
  return rep;
}

VerificationReport check_lemma_2_5(const Subject& subject, const HarnessConfig& cfg) {
  const auto& prof = subject.profile;
  VerificationReport rep = start(Target::Lemma25, subject);
  rep.envelope = "r^(2 gamma - 1)";
  if (rep.refused) return rep;
  const double g = gamma(prof.params());
  rep.norm_used = annulus_gradient_norm(prof, cfg.quad);
  if (trivial(rep, rep.norm_used, "u_r")) return rep;
  const double grad2 = rep.norm_used * rep.norm_used;
  for (double r : ladder(cfg)) {
    const QuadResult q = integrate(
        [&](double t) {
          const double ur = prof.u_r(t);
          return ur * ur;
        },
        0.5 * r, r, cfg.quad);
    const double den = grad2 * std::pow(r, 2.0 * g - 1.0);
    rep.samples.push_back({r, q.value, den, q.value / den});
  }
  trend_verdict(rep, cfg, false);
  rep.notes += "; normalized by the squared L^2 norm of the gradient on the annulus";
  return rep;
}

VerificationReport check_prop_2_6(const Subject& subject, const HarnessConfig& cfg) {
  const auto& prof = subject.profile;
  VerificationReport rep = start(Target::Prop26, subject);
  rep.envelope = "r^gamma";
  if (rep.refused) return rep;
  const double g = gamma(prof.params());
  rep.norm_used = annulus_gradient_norm(prof, cfg.quad);
  if (trivial(rep, rep.norm_used, "u_r")) return rep;
  for (double r : ladder(cfg)) {
    const double num = std::abs(prof.u(r) - prof.u(0.5 * r));
    const double den = rep.norm_used * std::pow(r, g);
    rep.samples.push_back({r, num, den, num / den});
  }
  trend_verdict(rep, cfg, false);
  rep.notes += "; normalized by the L^2 norm of the gradient on the annulus";
  return rep;
}

std::vector<TestFunction> default_key_lemma_functions(const ProblemParams& p) {
  const double beta = std::max(-0.5 * p.alpha(), -0.5);
  std::vector<TestFunction> out;
  out.push_back(TestFunction::piecewise_linear_peak(0.5, 0.1));
  out.push_back(TestFunction::power_then_linear(p, beta, 0.5, 0.1));
  out.push_back(lemma_bound_test_function(p, 0.25, beta));
  out.push_back(TestFunction::truncation(TestFunction::one_minus_t(), 0.5, 0.1));
  out.push_back(TestFunction::one_minus_t());
  return out;
}

VerificationReport check_key_lemma(const Subject& subject, const std::vector<TestFunction>& functions,
                                   const HarnessConfig& cfg) {
  const auto& prof = subject.profile;
  VerificationReport rep = start(Target::KeyLemma, subject);
  rep.envelope = "none";
  if (rep.refused) return rep;
  for (const auto& v : functions)
    if (v.value(1.0) != 0.0) throw std::invalid_argument("check_key_lemma: test functions must vanish at t = 1");

  bool signs_ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (double r0 : cfg.r0_list) {
    for (const auto& v : functions) {
      const double value = key_functional_I(prof, r0, 1.0, v, cfg.quad).value;
      const double scale = key_functional_scale(prof, r0, 1.0, v, cfg.quad).value;
      const double ratio = scale > 0.0 ? value / scale : 0.0;
      if (value < -cfg.key_lemma_tol * scale) signs_ok = false;
      worst = std::min(worst, ratio);
      rep.samples.push_back({r0, value, scale, ratio});
    }
  }

  // The eps-limit depends on v only through v(r0); 1 - t stands in for all v.
  const TestFunction base = TestFunction::one_minus_t();
  bool limits_ok = true;
  std::ostringstream rates;
  for (double r0 : cfg.r0_list) {
    const double limit = truncation_limit(prof, r0, base, cfg.quad).value;
    std::vector<double> errs;
    for (double div : {4.0, 16.0, 64.0}) {
      const double eps = r0 / div;
      const TestFunction vbar = TestFunction::truncation(base, r0, eps);
      const double value = key_functional_I(prof, eps, r0, vbar, cfg.quad).value;
      const double err = limit != 0.0 ? std::abs(value - limit) / std::abs(limit) : std::abs(value);
      errs.push_back(err);
      rep.truncation.push_back({r0, eps, value, limit, err});
    }
    if (!(errs.back() <= cfg.truncation_tol)) limits_ok = false;
    if (errs.back() > 0.0) rates << " r0=" << format_number(r0) << ":" << format_number(errs[1] / errs[2]);
  }
  rep.empirical_constant = worst;
  rep.verdict = signs_ok && limits_ok;
  std::ostringstream os;
  os << "min I/scale=" << format_number(worst) << (signs_ok ? " (sign ok)" : " (negative beyond tolerance)")
     << "; truncation limit " << (limits_ok ? "within" : "outside") << " " << format_number(cfg.truncation_tol)
     << " at eps=r0/64; error ratio eps r0/16 to r0/64 (4 for first order):" << rates.str();
  rep.notes = os.str();
  return rep;
}

VerificationReport check_prop_2_4(const Subject& subject, const HarnessConfig& cfg) {
  (void)cfg;
  const auto& prof = subject.profile;
  VerificationReport rep = start(Target::Prop24, subject);
  rep.envelope = "none";
  if (rep.refused) return rep;
  constexpr int kPoints = 512;
  int changes = 0, prev = 0;
  double min_abs = std::numeric_limits<double>::infinity();
  bool all_zero = true;
  for (int i = 0; i < kPoints; ++i) {
    const double r = std::pow(10.0, -6.0 + 6.0 * i / (kPoints - 1));
    const double ur = prof.u_r(r);
    const int sign = (ur > 0.0) - (ur < 0.0);
    if (sign != 0) all_zero = false;
    if (sign != 0 && prev != 0 && sign != prev) ++changes;
    if (sign != 0) prev = sign;
    min_abs = std::min(min_abs, std::abs(ur));
    rep.samples.push_back({r, ur, 1.0, ur});
  }
  if (all_zero) {
    rep.verdict = true;
    rep.notes = "trivial subject: constant profile";
    return rep;
  }
  rep.empirical_constant = min_abs;
  rep.verdict = changes == 0 && min_abs > 0.0;
  rep.notes = "sign changes=" + std::to_string(changes) + " min|u_r|=" + format_number(min_abs) +
              (prev < 0 ? " u_r<0" : " u_r>0");
  return rep;
}

double ladder_spread(const VerificationReport& report) {
  if (report.samples.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, mag = 0.0;
  for (const auto& s : report.samples) {
    lo = std::min(lo, s.ratio);
    hi = std::max(hi, s.ratio);
    mag = std::max(mag, std::abs(s.ratio));
  }
  return mag > 0.0 ? (hi - lo) / mag : 0.0;
}

LadderSum dyadic_ladder_sum(const RadialProfile& profile, double r1, int depth) {
  LadderSum out{std::abs(profile.u(r1) - profile.u(std::ldexp(r1, -depth))), 0.0};
  for (int k = 1; k <= depth; ++k) out.sum += std::abs(profile.u(std::ldexp(r1, 1 - k)) - profile.u(std::ldexp(r1, -k)));
  return out;
}

void write_plotdata(const RadialProfile& profile, std::ostream& os, double r_lo, int points) {
  if (!(r_lo > 0.0 && r_lo < 1.0) || points < 2) throw std::invalid_argument("write_plotdata: need 0 < r_lo < 1, points >= 2");
  const ProblemParams& p = profile.params();
  os << "r,u,u_r,weight,weight_r2,envelope,u_over_envelope\n";
  const double span = std::log(r_lo);
  for (int i = 0; i < points; ++i) {
    const double r = i == points - 1 ? 1.0 : std::exp(span * (1.0 - static_cast<double>(i) / (points - 1)));
    const double u = profile.u(r), w = profile.weight(r), env = envelope(p, r);
    os << format_number(r) << ',' << format_number(u) << ',' << format_number(profile.u_r(r)) << ','
       << format_number(w) << ',' << format_number(w * r * r) << ',' << format_number(env) << ','
       << format_number(std::abs(u) / env) << '\n';
  }
}

}  // namespace hhstab
