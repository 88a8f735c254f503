#pragma once

#include <functional>

namespace hhstab {

enum class QuadMethod { AdaptiveSimpson, GaussLegendreComposite };
enum class Grading { Uniform, GeometricTowardZero };

struct QuadratureSpec {
  QuadMethod method = QuadMethod::GaussLegendreComposite;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Maximum bisection depth of any subinterval.
  int max_subdivisions = 60;
  Grading grading = Grading::Uniform;
  /// Smallest graded panel, relative to b - a.
  double grading_floor = 1e-12;

  /// Throws std::invalid_argument on non-positive tolerances or max_subdivisions < 1.
  void validate() const;

  static QuadratureSpec graded() {
    QuadratureSpec q;
    q.grading = Grading::GeometricTowardZero;
    return q;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  long evaluations = 0;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    evaluations += o.evaluations;
    return *this;
  }
};

using ScalarFn = std::function<double(double)>;

/// Adaptive integral of fn over [a, b].
///
/// With GeometricTowardZero grading, [a, b] is cut into dyadic panels
/// [a + w 2^-(k+1), a + w 2^-k] down to grading_floor; the remaining piece
/// next to a is extrapolated from the ratio of the last two panel sums,
/// which is exact for power-law behaviour at a. Neither method evaluates fn
/// at a in graded mode, so an integrable singularity there is admissible.
///
/// When the depth limit is hit the best estimate is returned with
/// converged == false and the achieved error estimate.
QuadResult integrate(const ScalarFn& fn, double a, double b, const QuadratureSpec& spec = {});

}  // namespace hhstab
