#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhstab/families.hpp"
#include "hhstab/quadrature.hpp"
#include "hhstab/spectra.hpp"
#include "hhstab/test_functions.hpp"

namespace hhstab {

/// 1 (subcritical), |log r| + 1 (critical), r^gamma (supercritical). Requires r ∈ (0, 1].
double envelope(const ProblemParams& p, double r);

/// Human-readable form of the envelope for the regime of p.
std::string envelope_name(const ProblemParams& p);

/// (omega_N ∫_{1/2}^1 t^{N-1} (u^2 + u_r^2) dt)^{1/2}.
double annulus_h1_norm(const RadialProfile& profile, const QuadratureSpec& quad = {});

/// (omega_N ∫_{1/2}^1 t^{N-1} u_r^2 dt)^{1/2}, the L^2 norm of the gradient on the annulus.
double annulus_gradient_norm(const RadialProfile& profile, const QuadratureSpec& quad = {});

struct HarnessConfig {
  /// Top of the dyadic ladder; the largest mesh radius in (1/2, 1], which is 1 for every subject here.
  double r1 = 1.0;
  /// Rungs r1 / 2^k for k = 0..ladder_depth.
  int ladder_depth = 14;
  /// Largest admissible ratio of the last three rungs to the earlier ones.
  double growth_limit = 1.05;
  /// Key lemma sign tolerance, relative to the absolute-integrand scale.
  double key_lemma_tol = 1e-8;
  /// Relative tolerance of the truncation limit at the smallest eps.
  double truncation_tol = 1e-2;
  std::vector<double> r0_list{1e-2, 1e-1, 0.3};
  QuadratureSpec quad;
  StabilityProtocol protocol;
  /// Run the eigenvalue protocol when building subjects.
  bool run_spectra = true;
};

/// A profile together with the evidence that decides whether the estimates apply.
struct Subject {
  RadialProfile profile;
  std::optional<StabilityVerdict> spectral;
  HardyComparison hardy;
  H1Witness h1;
  bool eligible = false;
  /// Why the subject is (or is not) eligible.
  std::string basis;
};

Subject make_subject(const RadialProfile& profile, const HarnessConfig& cfg = {});

enum class Target { Theorem_i, Theorem_ii, Theorem_iii, Lemma25, Prop26, KeyLemma, Prop24 };

const char* to_string(Target t);

/// Theorem target matching the regime of p.
Target theorem_target(const ProblemParams& p);

struct LadderSample {
  double r;
  double numerator;
  double denominator;
  double ratio;
};

struct TruncationSample {
  double r0;
  double eps;
  double value;
  double limit;
  double rel_error;
};

struct VerificationReport {
  Target target = Target::Theorem_i;
  std::string subject;
  double empirical_constant = 0.0;
  std::string envelope;
  double norm_used = 0.0;
  std::vector<LadderSample> samples;
  std::vector<TruncationSample> truncation;
  bool verdict = false;
  bool refused = false;
  std::string notes;

  nlohmann::json to_json() const;
};

/// C_emp = max_k |u(r_k)| / (envelope(r_k) ||u||_{H^1(annulus)}) over the dyadic ladder.
VerificationReport check_theorem(const Subject& subject, const HarnessConfig& cfg = {});

/// K_emp = max_k ∫_{r_k/2}^{r_k} u_r^2 dt / (||∇u||^2 r_k^{2 gamma - 1}).
VerificationReport check_lemma_2_5(const Subject& subject, const HarnessConfig& cfg = {});

/// K'_emp = max_k |u(r_k) - u(r_k/2)| / (||∇u|| r_k^gamma).
VerificationReport check_prop_2_6(const Subject& subject, const HarnessConfig& cfg = {});

/// The proof test functions for p: peak, power-then-linear, three-piece power,
/// truncated 1 - t and 1 - t itself. All vanish at t = 1.
std::vector<TestFunction> default_key_lemma_functions(const ProblemParams& p);

/// Sign of I(r0, 1; v) for every v and r0, plus the eps -> 0 limit of the
/// truncated functional at eps ∈ {r0/4, r0/16, r0/64}.
VerificationReport check_key_lemma(const Subject& subject, const std::vector<TestFunction>& functions,
                                   const HarnessConfig& cfg = {});

/// u_r keeps one strict sign on a log grid of [1e-6, 1].
VerificationReport check_prop_2_4(const Subject& subject, const HarnessConfig& cfg = {});

/// Relative spread (max - min) / max |ratio| of a ladder, 0 for an all-zero ladder.
double ladder_spread(const VerificationReport& report);

struct LadderSum {
  /// |u(r1) - u(r1/2^K)|.
  double direct;
  /// Σ_k |u(r1/2^{k-1}) - u(r1/2^k)|.
  double sum;
};

LadderSum dyadic_ladder_sum(const RadialProfile& profile, double r1, int depth);

/// CSV "r,u,u_r,weight,weight_r2,envelope,u_over_envelope" on a log grid of [r_lo, 1].
void write_plotdata(const RadialProfile& profile, std::ostream& os, double r_lo = 1e-4, int points = 200);

/// %.17g, the number format of every report file.
std::string format_number(double v);

}  // namespace hhstab
