#include "hhstab/exponents.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hhstab {

ProblemParams::ProblemParams(double dimension, double alpha)
    : dim_(dimension), alpha_(alpha) {
  if (!std::isfinite(dimension) || dimension < 2.0)
    throw std::invalid_argument("ProblemParams: dimension must satisfy N >= 2");
  if (!std::isfinite(alpha) || alpha <= -2.0)
    throw std::invalid_argument("ProblemParams: weight exponent must satisfy alpha > -2");
}

double ExtendedReal::value() const {
  if (!value_) throw std::logic_error("ExtendedReal: value() on an unbounded quantity");
  return *value_;
}

std::string ExtendedReal::to_string() const {
  if (!value_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *value_);
  return buf;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "Subcritical";
    case Regime::Critical: return "Critical";
    case Regime::Supercritical: return "Supercritical";
  }
  return "?";
}

double critical_offset(const ProblemParams& p) { return 10.0 + 4.0 * p.alpha() - p.dim(); }

namespace {

// sqrt((alpha+2)(alpha+2N-2)); both factors are positive for valid params.
double root_term(const ProblemParams& p) {
  return std::sqrt((p.alpha() + 2.0) * (p.alpha() + 2.0 * p.dim() - 2.0));
}

}  // namespace

double gamma(const ProblemParams& p) {
  return 0.5 * (4.0 - p.dim() + p.alpha() + root_term(p));
}

double s_alpha(const ProblemParams& p) { return -0.5 * (p.alpha() + root_term(p)); }

double hardy_constant(const ProblemParams& p) {
  const double d = p.dim() - 2.0;
  return 0.25 * d * d;
}

ExtendedReal p_joseph_lundgren(const ProblemParams& p) {
  if (regime(p) != Regime::Supercritical) return ExtendedReal::unbounded();
  const double n = p.dim();
  const double a = p.alpha();
  const double num = (n - 2.0) * (n - 2.0) - 2.0 * (a + 2.0) * (a + n) +
                     2.0 * std::sqrt(std::pow(a + 2.0, 3) * (a + 2.0 * n - 2.0));
  const double den = (n - 2.0) * (n - 4.0 * a - 10.0);
  return ExtendedReal::finite(num / den);
}

ExtendedReal p_joseph_lundgren_classical(double n) {
  if (n <= 10.0 + kCriticalLineTol) return ExtendedReal::unbounded();
  const double num = (n - 2.0) * (n - 2.0) - 4.0 * n + 8.0 * std::sqrt(n - 1.0);
  return ExtendedReal::finite(num / ((n - 2.0) * (n - 10.0)));
}

ExtendedReal critical_sobolev(const ProblemParams& p) {
  if (p.dim() == 2.0) return ExtendedReal::unbounded();
  return ExtendedReal::finite((p.dim() + 2.0) / (p.dim() - 2.0));
}

Regime regime(const ProblemParams& p) {
  const double off = critical_offset(p);
  if (std::abs(off) <= kCriticalLineTol) return Regime::Critical;
  return off > 0.0 ? Regime::Subcritical : Regime::Supercritical;
}

double power_stability_margin(const ProblemParams& p, double g) {
  if (!(g < 0.0)) throw std::invalid_argument("power_stability_margin: requires g < 0");
  return hardy_constant(p) - (-g + p.alpha() + 2.0) * (g + p.dim() - 2.0);
}

ExponentReport exponent_report(const ProblemParams& p) {
  return ExponentReport{p,
                        gamma(p),
                        s_alpha(p),
                        hardy_constant(p),
                        critical_sobolev(p),
                        p_joseph_lundgren(p),
                        regime(p)};
}

}  // namespace hhstab
