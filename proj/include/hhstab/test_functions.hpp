#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhstab/exponents.hpp"

namespace hhstab {

enum class TestFunctionKind {
  PiecewiseLinearPeak,  // t/(r1-eps), (r1-t)/eps, 0
  PowerThenLinear,      // (t/(r1-eps))^beta, (r1-t)/eps, 0
  ThreePiecePower,      // r^{s-beta} t^beta, t^s, 2^{1-s}(1-t)
  Truncation,           // 0, v(r0)(t-eps)/(r0-eps), v(t)
  PiecewiseLinear,      // interpolates nodal values; hats, 1 - t, sampled shapes
};

const char* to_string(TestFunctionKind k);

/// Parameters of the piecewise test functions; which fields are read depends on the kind.
struct TestFunctionParams {
  double r1 = 0.5;
  double eps = 0.1;
  double beta = 1.0;
  double r = 0.25;
  std::optional<double> s;  // defaults to s_alpha(p) for ThreePiecePower
  double r0 = 0.5;
};

/// Lipschitz test function v on (0, 1] with known breakpoints.
///
/// Values are immutable; Truncation shares its base function.
class TestFunction {
 public:
  static TestFunction piecewise_linear_peak(double r1, double eps);
  /// Throws unless beta ∈ (-1-alpha, 1) and eps < r1/2.
  static TestFunction power_then_linear(const ProblemParams& p, double beta, double r1, double eps);
  /// Throws unless 0 < r < 1/2.
  static TestFunction three_piece_power(double r, double s, double inner_exponent = 1.0);
  /// Throws unless 0 < eps < r0 < 1.
  static TestFunction truncation(const TestFunction& base, double r0, double eps);
  /// Nodes strictly increasing in [0, 1].
  static TestFunction piecewise_linear(std::vector<double> nodes, std::vector<double> values);

  static TestFunction hat(double a, double b);
  static TestFunction one_minus_t() { return piecewise_linear({0.0, 1.0}, {1.0, 0.0}); }
  static TestFunction zero() { return piecewise_linear({0.0, 1.0}, {0.0, 0.0}); }

  TestFunctionKind kind() const { return kind_; }
  double value(double t) const;
  double derivative(double t) const;

  /// Interior kinks, strictly increasing, inside (0, 1).
  std::vector<double> breakpoints() const;
  /// Closed interval outside of which v vanishes identically.
  std::pair<double, double> support() const;

  /// lambda * v.
  TestFunction scaled(double lambda) const;

  nlohmann::json to_json() const;
  static TestFunction from_json(const nlohmann::json& j);

 private:
  TestFunction() = default;

  double raw_value(double t) const;
  double raw_derivative(double t) const;

  TestFunctionKind kind_ = TestFunctionKind::PiecewiseLinear;
  double r1_ = 0.0, eps_ = 0.0, beta_ = 1.0, r_ = 0.0, s_ = 0.0, r0_ = 0.0;
  double factor_ = 1.0;
  std::vector<double> nodes_, values_;
  std::shared_ptr<const TestFunction> base_;
};

/// The test functions written out in the proofs, built from (kind, p, params).
TestFunction proof_test_function(TestFunctionKind kind, const ProblemParams& p,
                                 const TestFunctionParams& params);

/// ThreePiecePower with s = s_alpha(p); for N = 2 the inner exponent is beta.
TestFunction lemma_bound_test_function(const ProblemParams& p, double r, double beta = 0.0);

}  // namespace hhstab
