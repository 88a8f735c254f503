#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hhstab/functionals.hpp"

using namespace hhstab;
using doctest::Approx;

namespace {

RadialProfile custom(ProblemParams p, RadialProfile::Fn u, RadialProfile::Fn ur, Nonlinearity f) {
  return RadialProfile(p, std::move(u), std::move(ur), std::move(f), "custom");
}

// Piecewise-linear sample of t^{-(N-2)/2} sin(pi log(t/a) / log(b/a)) on (a, b).
TestFunction log_sine(double n, double a, double b, int nodes) {
  std::vector<double> t, v;
  for (int i = 0; i <= nodes; ++i) {
    const double x = a * std::pow(b / a, double(i) / nodes);
    t.push_back(x);
    v.push_back(i == 0 || i == nodes ? 0.0 : std::pow(x, -(n - 2) / 2) * std::sin(M_PI * i / nodes));
  }
  return TestFunction::piecewise_linear(t, v);
}

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2).omega_N == Approx(2 * M_PI).epsilon(1e-15));
  CHECK(sphere_area(3).omega_N == Approx(4 * M_PI).epsilon(1e-15));
  // 2 pi^5 / 4! in 30-digit arithmetic
  CHECK(sphere_area(10).omega_N == Approx(25.5016403987734544).epsilon(1e-14));
}

TEST_CASE("energy examples") {
  const ProblemParams p(3, 0);
  const auto zero = custom(p, [](double) { return 0.0; }, [](double) { return 0.0; }, Nonlinearity::constant(0.0));
  CHECK(energy(zero, 0.1, 0.9).value == 0.0);
  const auto zero_f1 = custom(p, [](double) { return 0.0; }, [](double) { return 0.0; }, Nonlinearity::constant(1.0));
  CHECK(energy(zero_f1, 0.0, 1.0).value == 0.0);
  const auto lin = custom(p, [](double r) { return 1 - r; }, [](double) { return -1.0; }, Nonlinearity::constant(0.0));
  CHECK(energy(lin, 0.0, 1.0).value == Approx(4 * M_PI / 3).epsilon(1e-12));
  CHECK_THROWS_AS(energy(lin, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("stability form examples") {
  const auto glog = gelfand_log_family({10, 0});
  CHECK(stability_form(glog, TestFunction::zero()).value == 0.0);
  CHECK(stability_form(glog, TestFunction::hat(0.25, 0.75)).value > 0.0);
  CHECK_THROWS_AS(stability_form(glog, TestFunction::one_minus_t()), std::invalid_argument);
}

TEST_CASE("stability form is scale invariant on (a, 2a) for power weights") {
  // With weight c/t^2 both terms scale like a^{N-2}; the sign cannot change with a.
  const ProblemParams p(11, 0);
  const auto prof = power_family(p, -1.0);
  const double ref = stability_form(prof, TestFunction::hat(0.25, 0.5)).value;
  CHECK(ref > 0.0);
  for (int k = 3; k <= 10; ++k) {
    const double a = std::ldexp(1.0, -k);
    const double val = stability_form(prof, TestFunction::hat(a, 2 * a)).value;
    CHECK(val / std::pow(a / 0.25, 9) == Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("super-Hardy power weight makes the form negative on wide supports") {
  // weight 24/t^2 > 20.25/t^2; the form on (a, 1/2) turns negative once
  // log(1/(2a)) exceeds pi / sqrt(24 - 20.25).
  const ProblemParams p(11, 0);
  const auto prof = power_family(p, -1.0);
  CHECK(stability_form(prof, log_sine(11, 0.25, 0.5, 64)).value > 0.0);
  bool negative = false;
  for (int k = 2; k <= 12 && !negative; ++k)
    negative = stability_form(prof, log_sine(11, std::ldexp(1.0, -k), 0.5, 256)).value < 0.0;
  CHECK(negative);
  // the Hardy-critical profile stays nonnegative on the same shapes
  const auto crit = power_family(p, gamma(p));
  for (int k = 2; k <= 12; ++k) CHECK(stability_form(crit, log_sine(11, std::ldexp(1.0, -k), 0.5, 256)).value > 0.0);
}

TEST_CASE("stability form is quadratic in phi") {
  const auto prof = power_family({11, 0}, -0.2);
  const auto phi = TestFunction::hat(0.1, 0.7);
  const double base = stability_form(prof, phi).value;
  for (double lam : {-3.0, 0.5, 7.0})
    CHECK(stability_form(prof, phi.scaled(lam)).value == Approx(lam * lam * base).epsilon(1e-12));
}

TEST_CASE("key functional examples") {
  const ProblemParams p(10, 0);
  const auto glog = gelfand_log_family(p);
  CHECK(key_functional_I(glog, 0.1, 1.0, TestFunction::zero()).value == 0.0);
  for (double r0 : {0.01, 0.1, 0.5}) CHECK(key_functional_I(glog, r0, 1.0, TestFunction::one_minus_t()).value >= 0.0);
  // middle segment of the three-piece function carries no weight
  const auto v = lemma_bound_test_function(p, 0.1);
  const double middle = key_functional_I(glog, 0.1, 0.5, v).value;
  const double scale = key_functional_scale(glog, 0.1, 0.5, v).value;
  CHECK(std::abs(middle) <= 1e-10 * scale);
}

TEST_CASE("middle coefficient vanishes at s_alpha") {
  for (double n = 2; n <= 20; n += 1.5)
    for (double a : {-1.5, 0.0, 3.0}) {
      const ProblemParams p(n, a);
      CHECK(std::abs(middle_coefficient(p, s_alpha(p))) <= 1e-12 * std::max(1.0, n * n));
    }
  CHECK(key_coefficient({10, 1}) == Approx(1 - 10 - 5));
}

TEST_CASE("splitting additivity") {
  const auto prof = power_family({11, 0}, gamma({11, 0}));
  const auto v = TestFunction::piecewise_linear_peak(0.5, 0.1);
  const double whole = key_functional_I(prof, 0.05, 0.9, v).value;
  const double parts = key_functional_I(prof, 0.05, 0.33, v).value + key_functional_I(prof, 0.33, 0.9, v).value;
  CHECK(parts == Approx(whole).epsilon(1e-10));
}

TEST_CASE("key functional is nonnegative for semi-stable families") {
  for (const auto& prof : {gelfand_log_family({10, 0}), power_family({11, 0}, gamma({11, 0})),
                           power_family({11, 0}, 0.5 * gamma({11, 0})), gelfand_log_family({15, 1})}) {
    const ProblemParams& p = prof.params();
    const std::vector<TestFunction> vs{TestFunction::piecewise_linear_peak(0.5, 0.1),
                                       TestFunction::power_then_linear(p, 0.5, 0.5, 0.1),
                                       lemma_bound_test_function(p, 0.25),
                                       TestFunction::truncation(TestFunction::one_minus_t(), 0.5, 0.1),
                                       TestFunction::one_minus_t()};
    for (double r0 : {1e-2, 1e-1, 0.3})
      for (const auto& v : vs) CHECK(key_functional_I(prof, r0, 1.0, v).value >= -1e-9);
  }
}

TEST_CASE("truncation limit is approached at first order") {
  const auto prof = gelfand_log_family({10, 0});
  const auto base = TestFunction::one_minus_t();
  const double r0 = 0.3;
  const double lim = truncation_limit(prof, r0, base).value;
  // closed form: (0.7/0.3)^2 * 2 * (1 - 5) * ∫_0^0.3 t^7 dt
  CHECK(lim == Approx(std::pow(0.7 / r0, 2) * 2 * -4 * std::pow(r0, 8) / 8).epsilon(1e-10));
  double prev = 0.0;
  for (int k : {16, 64, 256}) {
    const double eps = r0 / k;
    const double e = std::abs(key_functional_I(prof, eps, r0, TestFunction::truncation(base, r0, eps)).value - lim);
    if (prev > 0.0) CHECK(prev / e == Approx(4.0).epsilon(0.1));
    prev = e;
  }
}
