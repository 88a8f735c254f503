#pragma once

#include "hhstab/families.hpp"
#include "hhstab/quadrature.hpp"
#include "hhstab/test_functions.hpp"

namespace hhstab {

/// Area of the unit (N-1)-sphere, 2 pi^{N/2} / Gamma(N/2); |B_1| = omega_N / N.
struct SphereArea {
  double omega_N;
};

SphereArea sphere_area(double dimension);

/// omega_N ∫_a^b t^{N-1} (u_r^2 - t^alpha F(u)) dt. Requires 0 <= a < b <= 1.
QuadResult energy(const RadialProfile& profile, double a, double b, const QuadratureSpec& quad = {});

/// Second variation omega_N ∫ t^{N-1} (phi'^2 - t^alpha f'(u) phi^2) dt.
///
/// phi must vanish near the origin and at r = 1; throws std::invalid_argument
/// on a support violation.
QuadResult stability_form(const RadialProfile& profile, const TestFunction& phi,
                          const QuadratureSpec& quad = {});

/// ∫_a^b t^{N-1} u_r^2 (v'^2 + alpha v' v / t + (1 - N - alpha N/2) v^2 / t^2) dt,
/// split at the breakpoints of v.
QuadResult key_functional_I(const RadialProfile& profile, double a, double b, const TestFunction& v,
                            const QuadratureSpec& quad = {});

/// Same integral with the integrand replaced by its absolute value; the scale
/// against which the sign of key_functional_I is judged.
QuadResult key_functional_scale(const RadialProfile& profile, double a, double b, const TestFunction& v,
                                const QuadratureSpec& quad = {});

/// (v(r0)/r0)^2 (2+alpha)(1-N/2) ∫_0^{r0} t^{N-1} u_r^2 dt, the eps -> 0 limit of
/// I(eps, r0; truncation(v, r0, eps)).
QuadResult truncation_limit(const RadialProfile& profile, double r0, const TestFunction& v,
                            const QuadratureSpec& quad = {});

/// 1 - N - alpha N / 2, the coefficient of v^2/t^2 in the key functional.
double key_coefficient(const ProblemParams& p);

/// s^2 + alpha s + 1 - N - alpha N/2; vanishes at s = s_alpha(p).
double middle_coefficient(const ProblemParams& p, double s);

}  // namespace hhstab
