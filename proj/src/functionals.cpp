#include "hhstab/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hhstab {

SphereArea sphere_area(double n) {
  return {2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n)};
}

double key_coefficient(const ProblemParams& p) {
  return 1.0 - p.dim() - 0.5 * p.alpha() * p.dim();
}

double middle_coefficient(const ProblemParams& p, double s) {
  return s * s + p.alpha() * s + key_coefficient(p);
}

namespace {

// Integrates over [a, b] split at the given cut points. Pieces starting at a
// tiny radius are graded toward their left end.
QuadResult integrate_split(const ScalarFn& fn, double a, double b, const std::vector<double>& cuts,
                           const QuadratureSpec& quad) {
  std::vector<double> pts{a};
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  QuadResult total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadratureSpec q = quad;
    if (pts[i] < 1e-2 * (pts[i + 1] - pts[i])) q.grading = Grading::GeometricTowardZero;
    total += integrate(fn, pts[i], pts[i + 1], q);
  }
  return total;
}

void check_interval(double a, double b, const char* what) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw std::invalid_argument(std::string(what) + ": requires 0 <= a < b <= 1");
}

}  // namespace

QuadResult energy(const RadialProfile& prof, double a, double b, const QuadratureSpec& quad) {
  check_interval(a, b, "energy");
  const double n = prof.params().dim();
  const double al = prof.params().alpha();
  auto fn = [&](double t) {
    const double ur = prof.u_r(t);
    return std::pow(t, n - 1.0) * (ur * ur - std::pow(t, al) * prof.F(prof.u(t)));
  };
  QuadResult r = integrate_split(fn, a, b, {}, quad);
  const double w = sphere_area(n).omega_N;
  r.value *= w;
  r.error *= w;
  return r;
}

QuadResult stability_form(const RadialProfile& prof, const TestFunction& phi, const QuadratureSpec& quad) {
  const auto [lo, hi] = phi.support();
  if (!(lo > 0.0)) throw std::invalid_argument("stability_form: test function must vanish near the origin");
  if (hi > 1.0 || (hi == 1.0 && phi.value(1.0) != 0.0))
    throw std::invalid_argument("stability_form: test function must vanish at r = 1");
  const double n = prof.params().dim();
  auto fn = [&](double t) {
    const double dp = phi.derivative(t), v = phi.value(t);
    return std::pow(t, n - 1.0) * (dp * dp - prof.weight(t) * v * v);
  };
  QuadResult r = integrate_split(fn, lo, hi, phi.breakpoints(), quad);
  const double w = sphere_area(n).omega_N;
  r.value *= w;
  r.error *= w;
  return r;
}

QuadResult key_functional_I(const RadialProfile& prof, double a, double b, const TestFunction& v,
                            const QuadratureSpec& quad) {
  check_interval(a, b, "key_functional_I");
  const double n = prof.params().dim();
  const double al = prof.params().alpha();
  const double k = key_coefficient(prof.params());
  auto fn = [&](double t) {
    const double ur = prof.u_r(t), dv = v.derivative(t), vv = v.value(t);
    return std::pow(t, n - 1.0) * ur * ur * (dv * dv + al * dv * vv / t + k * vv * vv / (t * t));
  };
  return integrate_split(fn, a, b, v.breakpoints(), quad);
}

QuadResult key_functional_scale(const RadialProfile& prof, double a, double b, const TestFunction& v,
                                const QuadratureSpec& quad) {
  check_interval(a, b, "key_functional_scale");
  const double n = prof.params().dim();
  const double al = prof.params().alpha();
  const double k = key_coefficient(prof.params());
  auto fn = [&](double t) {
    const double ur = prof.u_r(t), dv = v.derivative(t), vv = v.value(t);
    return std::pow(t, n - 1.0) * ur * ur *
           (dv * dv + std::abs(al * dv * vv / t) + std::abs(k) * vv * vv / (t * t));
  };
  return integrate_split(fn, a, b, v.breakpoints(), quad);
}

QuadResult truncation_limit(const RadialProfile& prof, double r0, const TestFunction& v,
                            const QuadratureSpec& quad) {
  const ProblemParams& p = prof.params();
  const double n = p.dim();
  auto fn = [&](double t) {
    const double ur = prof.u_r(t);
    return std::pow(t, n - 1.0) * ur * ur;
  };
  QuadratureSpec q = quad;
  q.grading = Grading::GeometricTowardZero;
  QuadResult r = integrate(fn, 0.0, r0, q);
  const double c = std::pow(v.value(r0) / r0, 2) * (2.0 + p.alpha()) * (1.0 - 0.5 * n);
  r.value *= c;
  r.error *= std::abs(c);
  return r;
}

}  // namespace hhstab
