#pragma once

#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhstab/exponents.hpp"
#include "hhstab/families.hpp"
#include "hhstab/nonlinearity.hpp"

namespace hhstab {

struct SolverConfig {
  /// Radius where the series start hands over to the integrator.
  double eps_start = 1e-6;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = 0.05;
  /// Log-spaced output points from eps_start to 1.
  int mesh_points = 2048;
  /// |u| beyond this counts as blow-up.
  double blowup_threshold = 1e12;
  /// Upper end of the center-value scan for branch solves.
  double m_max = 50.0;

  void validate() const;
};

struct SolverStats {
  long steps = 0;
  /// Accumulated local tolerance over all accepted steps, a bound-style estimate of the error in u.
  double error_estimate = 0.0;
  /// Largest relative residual of the interpolant at mesh midpoints.
  double max_midpoint_residual = 0.0;
  int shots = 1;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double radius) : std::runtime_error(what), radius_(radius) {}
  /// Radius reached when the failure occurred.
  double radius() const { return radius_; }

 private:
  double radius_;
};

/// Mesh-sampled radial solution. `center_value` is u(0) for shooting
/// solutions and NaN for sampled singular profiles.
struct RadialSolution {
  ProblemParams params;
  Nonlinearity f;
  std::vector<double> mesh;
  std::vector<double> u;
  std::vector<double> ur;
  double center_value;
  SolverStats stats;
  std::string label;

  /// u'' from the equation at mesh point i.
  double urr(std::size_t i) const;

  /// Piecewise Hermite interpolant (cubic in u_r, integrated for u); below the
  /// first mesh point the two-term series is used.
  RadialProfile as_profile() const;

  nlohmann::json metadata() const;
  /// Header "r,u,u_r" followed by one row per mesh point.
  void write_csv(std::ostream& os) const;
};

/// Two-term expansion u ≈ m - f(m) r^{2+alpha}/((2+alpha)(N+alpha)) and its derivative at r = eps.
std::pair<double, double> series_start(const ProblemParams& p, const Nonlinearity& f, double m, double eps);

/// Log-spaced mesh of `points` radii from eps to 1 (last point exactly 1).
std::vector<double> log_mesh(double eps, int points);

/// Integrates -u'' - (N-1)/r u' = r^alpha f(u) from the series start at eps_start
/// to r = 1. Throws SolverError on blow-up or integrator failure.
RadialSolution shoot(const ProblemParams& p, const Nonlinearity& f, double m, const SolverConfig& cfg = {});

/// u(1) for center value m, without building the output mesh.
double shoot_endpoint(const ProblemParams& p, const Nonlinearity& f, double m, const SolverConfig& cfg = {});

/// Minimal-branch solution of -Δu = lambda |x|^alpha e^u with u(1) = 0:
/// the smallest m >= 0 with u(1; m) = 0. Throws SolverError when no sign
/// change of the shoot map is found on [0, cfg.m_max].
RadialSolution solve_gelfand_branch(const ProblemParams& p, double lambda, const SolverConfig& cfg = {});

/// Samples a profile on the solver's output mesh.
RadialSolution sample_profile(const RadialProfile& profile, const SolverConfig& cfg = {});

/// Largest residual -u'' - (N-1)/r u' - r^alpha f(u), divided by max(1, |r^alpha f(u)|), of the
/// interpolant at the midpoints of consecutive mesh points.
double midpoint_residual(const RadialSolution& sol);

struct SignReport {
  bool constant = false;
  /// Mesh intervals [r_i, r_{i+1}] on which u_r changes sign.
  std::vector<std::pair<double, double>> sign_changes;
  /// min |u_r| over the mesh, first point excluded.
  double min_abs_ur = 0.0;
  /// Sign of u_r at r = 1 (0 for constant solutions).
  int sign = 0;
};

SignReport derivative_sign_profile(const RadialSolution& sol);

}  // namespace hhstab
