#include "hhstab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hhstab/parallel.hpp"

namespace hhstab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::SemiStable: return "SemiStable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

double EigenProblem::rayleigh(std::span<const double> phi) const {
  if (phi.size() != size()) throw std::invalid_argument("EigenProblem::rayleigh: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    num += diag[i] * phi[i] * phi[i];
    if (i + 1 < phi.size()) num += 2.0 * offdiag[i] * phi[i] * phi[i + 1];
    den += mass[i] * phi[i] * phi[i];
  }
  return num / den;
}

EigenProblem assemble_weight(const ProblemParams& p, const std::function<double(double)>& weight, double r_min,
                             int n) {
  if (!(r_min > 0.0 && r_min <= 0.5)) throw std::invalid_argument("assemble: r_min must lie in (0, 1/2]");
  if (n < 16) throw std::invalid_argument("assemble: n must be >= 16");
  const double dim = p.dim();
  EigenProblem ep{p, {}, {}, {}, {}, {}, 1.0};
  ep.mesh.resize(static_cast<std::size_t>(n) + 1);
  const double log_span = -std::log(r_min);
  for (int k = 0; k <= n; ++k) ep.mesh[k] = r_min * std::exp(log_span * k / n);
  ep.mesh.back() = 1.0;

  // a_k = ∫_{t_k}^{t_{k+1}} t^{N-1} dt / h_k^2 on each element.
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t0 = ep.mesh[k], t1 = ep.mesh[k + 1], h = t1 - t0;
    const double integral = std::pow(t0, dim) * std::expm1(dim * std::log(t1 / t0)) / dim;
    a[k] = integral / (h * h);
  }
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  ep.diag.resize(m);
  ep.mass.resize(m);
  ep.potential.resize(m);
  ep.offdiag.resize(m - 1);
  double wmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = ep.mesh[i + 1];
    const double hl = t - ep.mesh[i], hr = ep.mesh[i + 2] - t;
    const double w = weight(t);
    if (!std::isfinite(w)) throw std::runtime_error("assemble: weight evaluation failed at r = " + std::to_string(t));
    ep.mass[i] = std::pow(t, dim - 1.0) * 0.5 * (hl + hr);
    ep.potential[i] = w;
    ep.diag[i] = a[i] + a[i + 1] - w * ep.mass[i];
    if (i + 1 < m) ep.offdiag[i] = -a[i + 1];
    wmax = std::max(wmax, std::abs(w));
  }
  ep.scale = std::max(1.0, wmax);
  return ep;
}

EigenProblem assemble(const RadialProfile& profile, double r_min, int n) {
  return assemble_weight(profile.params(), [&](double t) { return profile.weight(t); }, r_min, n);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Number of eigenvalues of the symmetric tridiagonal (d, e) below sigma.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double sigma) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i ? e[i - 1] * e[i - 1] / q : 0.0;
    q = d[i] - sigma - off;
    if (q == 0.0) q = -kEps * (std::abs(d[i]) + std::abs(sigma) + 1e-300);
    if (q < 0.0) ++count;
  }
  return count;
}

// Solves (T - sigma I) x = rhs by elimination without pivoting; T - sigma I is
// positive semidefinite for sigma at or below the smallest eigenvalue.
std::vector<double> shifted_solve(const std::vector<double>& d, const std::vector<double>& e, double sigma,
                                  std::vector<double> rhs) {
  const std::size_t m = d.size();
  std::vector<double> piv(m);
  piv[0] = d[0] - sigma;
  for (std::size_t i = 1; i < m; ++i) {
    if (piv[i - 1] == 0.0) piv[i - 1] = kEps * (std::abs(d[i - 1]) + 1e-300);
    const double l = e[i - 1] / piv[i - 1];
    piv[i] = d[i] - sigma - l * e[i - 1];
    rhs[i] -= l * rhs[i - 1];
  }
  if (piv[m - 1] == 0.0) piv[m - 1] = kEps * (std::abs(d[m - 1]) + 1e-300);
  rhs[m - 1] /= piv[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - e[i] * rhs[i + 1]) / piv[i];
  return rhs;
}

}  // namespace

EigenResult min_eigenvalue(const EigenProblem& ep, double rel_tol) {
  const std::size_t m = ep.size();
  EigenResult res;
  res.tol_eig = rel_tol * ep.scale;

  // Symmetric scaling M^{-1/2} K M^{-1/2}.
  std::vector<double> d(m), e(m ? m - 1 : 0), isq(m);
  for (std::size_t i = 0; i < m; ++i) {
    isq[i] = 1.0 / std::sqrt(ep.mass[i]);
    d[i] = ep.diag[i] * isq[i] * isq[i];
  }
  for (std::size_t i = 0; i + 1 < m; ++i) e[i] = ep.offdiag[i] * isq[i] * isq[i + 1];

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    const double rad = (i ? std::abs(e[i - 1]) : 0.0) + (i + 1 < m ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  // Any diagonal entry bounds the smallest eigenvalue from above.
  hi = std::min(hi, *std::min_element(d.begin(), d.end()));
  constexpr int kMaxIter = 400;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    const double width = hi - lo;
    if (width <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi)) || width <= 1e-300) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(d, e, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  res.iterations = it;
  res.converged = it < kMaxIter;
  res.lambda = 0.5 * (lo + hi);

  std::vector<double> x(m, 1.0);
  for (int k = 0; k < 4; ++k) {
    x = shifted_solve(d, e, lo, std::move(x));
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (double& v : x) v /= nrm;
  }
  res.eigenvector.resize(m);
  double mnorm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    res.eigenvector[i] = x[i] * isq[i];
    mnorm += ep.mass[i] * res.eigenvector[i] * res.eigenvector[i];
  }
  mnorm = std::sqrt(mnorm);
  for (double& v : res.eigenvector) v /= mnorm;
  res.rayleigh = ep.rayleigh(res.eigenvector);

  std::ostringstream os;
  os.precision(17);
  os << "bisection iterations=" << it << " bracket=[" << lo << ", " << hi << "] rayleigh=" << res.rayleigh;
  res.diagnostics = os.str();
  if (!res.converged) res.diagnostics += " (bisection did not reach full precision)";
  return res;
}

nlohmann::json StabilityVerdict::to_json() const {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& s : samples)
    table.push_back({{"r_min", s.r_min}, {"n", s.n}, {"lambda_min", s.lambda_min}, {"tol_eig", s.tol_eig}});
  return {{"schema_version", 1},
          {"verdict", to_string(verdict)},
          {"margin", margin},
          {"domain_monotone", domain_monotone},
          {"samples", table},
          {"notes", notes}};
}

StabilityVerdict is_semistable(const RadialProfile& profile, const StabilityProtocol& protocol) {
  if (protocol.r_mins.empty() || protocol.sizes.empty())
    throw std::invalid_argument("is_semistable: protocol must list r_min values and mesh sizes");
  std::vector<double> r_mins = protocol.r_mins;
  std::vector<int> sizes = protocol.sizes;
  std::sort(r_mins.begin(), r_mins.end(), std::greater<>());
  std::sort(sizes.begin(), sizes.end());

  StabilityVerdict out;
  out.samples.resize(r_mins.size() * sizes.size());
  parallel_for(out.samples.size(), protocol.workers, [&](std::size_t k) {
    const double r_min = r_mins[k / sizes.size()];
    const int n = sizes[k % sizes.size()];
    const EigenResult er = min_eigenvalue(assemble(profile, r_min, n), protocol.rel_tol);
    out.samples[k] = {r_min, n, er.lambda, er.tol_eig};
  });

  auto at = [&](std::size_t ri, std::size_t ni) -> const SpectrumSample& {
    return out.samples[ri * sizes.size() + ni];
  };
  out.margin = std::numeric_limits<double>::infinity();
  bool all_nonneg = true;
  for (const auto& s : out.samples) {
    out.margin = std::min(out.margin, s.lambda_min);
    if (s.lambda_min < -s.tol_eig) all_nonneg = false;
  }

  // Domain monotonicity on the finest mesh, allowing for the observed
  // discretisation change between the two finest meshes.
  const std::size_t fine = sizes.size() - 1;
  for (std::size_t ri = 1; ri < r_mins.size(); ++ri) {
    auto disc = [&](std::size_t r) {
      return fine > 0 ? std::abs(at(r, fine).lambda_min - at(r, fine - 1).lambda_min) : 0.0;
    };
    const double slack = 10.0 * std::max(at(ri, fine).tol_eig, at(ri - 1, fine).tol_eig) + disc(ri) + disc(ri - 1);
    if (at(ri, fine).lambda_min > at(ri - 1, fine).lambda_min + slack) out.domain_monotone = false;
  }

  std::ostringstream notes;
  notes << "radial perturbations only; non-radial modes untested";
  if (all_nonneg) {
    out.verdict = Verdict::SemiStable;
  } else {
    bool unstable = false;
    for (std::size_t ri = 0; ri < r_mins.size() && !unstable; ++ri) {
      bool every = true;
      for (std::size_t ni = 0; ni < sizes.size(); ++ni)
        every = every && at(ri, ni).lambda_min < -10.0 * at(ri, ni).tol_eig;
      unstable = every;
    }
    out.verdict = unstable ? Verdict::Unstable : Verdict::Inconclusive;
    if (!unstable) notes << "; negative values not stable under refinement";
  }
  if (!out.domain_monotone) {
    out.verdict = Verdict::Inconclusive;
    notes << "; lambda_min increased as r_min decreased";
  }
  out.notes = notes.str();
  return out;
}

HardyComparison hardy_comparison(const RadialProfile& profile, double r_lo, int points) {
  HardyComparison hc{-std::numeric_limits<double>::infinity(), hardy_constant(profile.params()), false};
  const double span = std::log(r_lo);
  for (int i = 0; i < points; ++i) {
    const double t = std::exp(span * (1.0 - static_cast<double>(i) / (points - 1)));
    hc.sup_weight = std::max(hc.sup_weight, t * t * profile.weight(t));
  }
  hc.stable_by_hardy = hc.sup_weight <= hc.hardy + 1e-12 * std::max(1.0, hc.hardy);
  return hc;
}

}  // namespace hhstab
