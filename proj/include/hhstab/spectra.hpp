#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhstab/families.hpp"

namespace hhstab {

/// Discrete weighted Sturm-Liouville pencil on a geometric mesh of (r_min, 1)
/// with Dirichlet ends:
///   stiffness  ~  -(t^{N-1} phi')' - t^{N-1} w(t) phi   (linear elements)
///   mass       ~  t^{N-1} phi                         (lumped, diagonal)
/// where w(t) = t^alpha f'(u(t)). Unknowns are the n-1 interior nodes.
struct EigenProblem {
  ProblemParams params;
  std::vector<double> mesh;       // n+1 nodes, mesh.front() = r_min, mesh.back() = 1
  std::vector<double> diag;       // n-1
  std::vector<double> offdiag;    // n-2, entry i couples unknowns i and i+1
  std::vector<double> mass;       // n-1
  std::vector<double> potential;  // w at the interior nodes
  /// Reference magnitude for tol_eig: max(1, max |w|) over the interior nodes.
  double scale = 1.0;

  std::size_t size() const { return diag.size(); }
  /// (phi^T K phi) / (phi^T M phi) for nodal values phi at the interior nodes.
  double rayleigh(std::span<const double> phi) const;
};

/// Requires r_min ∈ (0, 1/2] and n >= 16.
EigenProblem assemble(const RadialProfile& profile, double r_min, int n);

/// Same assembly from an explicit potential w(t).
EigenProblem assemble_weight(const ProblemParams& p, const std::function<double(double)>& weight, double r_min,
                             int n);

struct EigenResult {
  double lambda = 0.0;
  /// Nodal eigenvector at the interior nodes, unit mass norm.
  std::vector<double> eigenvector;
  /// Rayleigh quotient of the eigenvector, an independent check on lambda.
  double rayleigh = 0.0;
  double tol_eig = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
};

/// Smallest eigenvalue of K phi = lambda M phi by Sturm-sequence bisection on the
/// symmetrically scaled tridiagonal matrix, then inverse iteration for the
/// eigenvector. tol_eig = rel_tol * scale.
EigenResult min_eigenvalue(const EigenProblem& ep, double rel_tol = 1e-9);

enum class Verdict { SemiStable, Unstable, Inconclusive };

const char* to_string(Verdict v);

struct StabilityProtocol {
  std::vector<double> r_mins{1e-2, 1e-3, 1e-4};
  std::vector<int> sizes{256, 1024, 4096};
  double rel_tol = 1e-9;
  unsigned workers = 0;
};

struct SpectrumSample {
  double r_min;
  int n;
  double lambda_min;
  double tol_eig;
};

struct StabilityVerdict {
  /// Sorted by (r_min descending, n ascending).
  std::vector<SpectrumSample> samples;
  Verdict verdict = Verdict::Inconclusive;
  /// Smallest lambda_min over the protocol.
  double margin = 0.0;
  /// lambda_min non-increasing as r_min decreases on the finest mesh.
  bool domain_monotone = true;
  std::string notes;

  nlohmann::json to_json() const;
};

/// SemiStable when every lambda_min >= -tol_eig; Unstable when, for some
/// r_min, lambda_min < -10 tol_eig at every mesh size; otherwise Inconclusive.
/// A domain-monotonicity violation also yields Inconclusive.
StabilityVerdict is_semistable(const RadialProfile& profile, const StabilityProtocol& protocol = {});

struct HardyComparison {
  /// sup over the grid of t^2 * t^alpha f'(u(t)).
  double sup_weight;
  double hardy;
  /// sup_weight <= hardy (up to rounding); sufficient for semi-stability only.
  bool stable_by_hardy;
};

HardyComparison hardy_comparison(const RadialProfile& profile, double r_lo = 1e-6, int points = 2001);

}  // namespace hhstab
