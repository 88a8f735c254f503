#pragma once

#include <optional>
#include <string>

namespace hhstab {

/// Dimension N and weight exponent alpha of -Δu = |x|^alpha f(u) on B_1 \ {0}.
///
/// N is admitted as a real number so that continuous sweeps (e.g. along the
/// line N = 10 + 4 alpha) are possible; every formula below is analytic in N.
class ProblemParams {
 public:
  /// Throws std::invalid_argument unless N >= 2 and alpha > -2.
  ProblemParams(double dimension, double alpha);

  double dim() const { return dim_; }
  double alpha() const { return alpha_; }

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

 private:
  double dim_;
  double alpha_;
};

/// A real number or +infinity. Unbounded values never participate in
/// arithmetic; callers must branch on is_finite().
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v); }
  static ExtendedReal unbounded() { return ExtendedReal(); }

  bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error when unbounded.
  double value() const;
  std::string to_string() const;

 private:
  ExtendedReal() = default;
  explicit ExtendedReal(double v) : value_(v) {}
  std::optional<double> value_;
};

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime r);

/// Absolute tolerance on N - (10 + 4 alpha) used to detect the critical line.
inline constexpr double kCriticalLineTol = 1e-12;

/// 10 + 4 alpha - N; positive below the critical line.
double critical_offset(const ProblemParams& p);

/// Sharp exponent of the pointwise estimates,
/// 2 - N/2 + alpha/2 + sqrt((alpha+2)(alpha+2N-2))/2.
double gamma(const ProblemParams& p);

/// Exponent of the middle piece of the Lemma-type test function,
/// -alpha/2 - sqrt((2+alpha)(2N-2+alpha))/2. Root of s^2 + alpha s + 1 - N - alpha N/2.
double s_alpha(const ProblemParams& p);

/// Optimal Hardy constant (N-2)^2/4.
double hardy_constant(const ProblemParams& p);

/// Joseph-Lundgren exponent for the weighted problem; unbounded when N <= 10 + 4 alpha.
ExtendedReal p_joseph_lundgren(const ProblemParams& p);

/// Classical (alpha = 0) Joseph-Lundgren exponent in the form
/// ((N-2)^2 - 4N + 8 sqrt(N-1)) / ((N-2)(N-10)); unbounded for N <= 10.
ExtendedReal p_joseph_lundgren_classical(double dimension);

/// Critical Sobolev exponent (N+2)/(N-2); unbounded for N = 2.
ExtendedReal critical_sobolev(const ProblemParams& p);

Regime regime(const ProblemParams& p);

/// (N-2)^2/4 - (-g + alpha + 2)(g + N - 2): Hardy margin of the singular power
/// profile r^g - 1. Requires g < 0 (throws std::invalid_argument otherwise).
double power_stability_margin(const ProblemParams& p, double g);

struct ExponentReport {
  ProblemParams params;
  double gamma;
  double s_alpha;
  double hardy;
  ExtendedReal p_sobolev;
  ExtendedReal p_jl;
  Regime regime;
};

ExponentReport exponent_report(const ProblemParams& p);

}  // namespace hhstab
