#include "hhstab/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hhstab {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(grading_floor > 0.0) || grading_floor >= 0.5)
    throw std::invalid_argument("QuadratureSpec: grading_floor must lie in (0, 1/2)");
}

namespace {

constexpr int kGaussPoints = 10;

struct GaussRule {
  std::array<double, kGaussPoints> x{};
  std::array<double, kGaussPoints> w{};
};

// Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_rule() {
  GaussRule rule;
  const int n = kGaussPoints;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.x[i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

double gauss(const ScalarFn& fn, double a, double b, long& evals, double* abs_mass = nullptr) {
  const auto& rule = gauss_rule();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0, sa = 0.0;
  for (int i = 0; i < kGaussPoints; ++i) {
    const double v = rule.w[i] * fn(c + h * rule.x[i]);
    s += v;
    sa += std::abs(v);
  }
  evals += kGaussPoints;
  if (abs_mass) *abs_mass = sa * std::abs(h);
  return s * h;
}

struct Segment {
  double a, b;
  double value;
  double error;
  double abs_mass;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment make_segment(const ScalarFn& fn, double a, double b, double whole, int depth, long& evals) {
  const double m = 0.5 * (a + b);
  double ml = 0.0, mr = 0.0;
  const double halves = gauss(fn, a, m, evals, &ml) + gauss(fn, m, b, evals, &mr);
  return Segment{a, b, halves, std::abs(halves - whole), ml + mr, depth};
}

constexpr std::size_t kMaxSegments = 200000;
constexpr double kEps = 2.220446049250313e-16;

QuadResult gauss_adaptive(const ScalarFn& fn, double a, double b, const QuadratureSpec& spec,
                          double abs_tol) {
  QuadResult res;
  std::priority_queue<Segment> heap;
  double total = 0.0, total_err = 0.0;
  double frozen = 0.0, frozen_err = 0.0;

  auto push = [&](Segment s) {
    total += s.value;
    total_err += s.error;
    heap.push(s);
  };
  push(make_segment(fn, a, b, gauss(fn, a, b, res.evaluations), 0, res.evaluations));

  while (!heap.empty() && total_err + frozen_err > std::max(abs_tol, spec.rel_tol * std::abs(total + frozen))) {
    Segment s = heap.top();
    heap.pop();
    total -= s.value;
    total_err -= s.error;
    // Differences at rounding level carry no information; further bisection cannot help.
    const bool roundoff_limited = s.error <= 64.0 * kEps * s.abs_mass;
    if (roundoff_limited || s.depth >= spec.max_subdivisions || heap.size() >= kMaxSegments) {
      frozen += s.value;
      frozen_err += s.error;
      if (!roundoff_limited) res.converged = false;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    // The parent's halves become the children's whole-interval estimates.
    long& ev = res.evaluations;
    const double wl = gauss(fn, s.a, m, ev);
    const double wr = gauss(fn, m, s.b, ev);
    push(make_segment(fn, s.a, m, wl, s.depth + 1, ev));
    push(make_segment(fn, m, s.b, wr, s.depth + 1, ev));
  }
  // Re-sum to shed accumulated rounding from the running totals.
  double value = frozen, err = frozen_err;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = value;
  res.error = err;
  return res;
}

struct SimpsonState {
  const ScalarFn& fn;
  int max_depth;
  long evals = 0;
  double error = 0.0;
  bool converged = true;
};

double simpson_step(SimpsonState& st, double a, double fa, double m, double fm, double b, double fb,
                    double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.fn(lm), frm = st.fn(rm);
  st.evals += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= st.max_depth || std::abs(delta) <= 15.0 * eps) {
    if (depth >= st.max_depth && std::abs(delta) > 15.0 * eps) st.converged = false;
    st.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, fa, lm, flm, m, fm, left, 0.5 * eps, depth + 1) +
         simpson_step(st, m, fm, rm, frm, b, fb, right, 0.5 * eps, depth + 1);
}

QuadResult simpson_adaptive(const ScalarFn& fn, double a, double b, const QuadratureSpec& spec,
                            double abs_tol) {
  SimpsonState st{fn, spec.max_subdivisions};
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  st.evals = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // A coarse composite estimate sets the scale for the relative tolerance.
  long ev = 0;
  const double scale = std::abs(gauss(fn, a, b, ev));
  st.evals += ev;
  const double eps = std::max(abs_tol, spec.rel_tol * scale);
  QuadResult res;
  res.value = simpson_step(st, a, fa, m, fm, b, fb, whole, eps, 0);
  res.error = st.error;
  res.converged = st.converged;
  res.evaluations = st.evals;
  return res;
}

QuadResult integrate_panel(const ScalarFn& fn, double a, double b, const QuadratureSpec& spec, double abs_tol) {
  if (spec.method == QuadMethod::AdaptiveSimpson) return simpson_adaptive(fn, a, b, spec, abs_tol);
  return gauss_adaptive(fn, a, b, spec, abs_tol);
}

}  // namespace

QuadResult integrate(const ScalarFn& fn, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(fn, b, a, spec);
    r.value = -r.value;
    return r;
  }
  if (spec.grading == Grading::Uniform) return integrate_panel(fn, a, b, spec, spec.abs_tol);

  const double width = b - a;
  const int panels = static_cast<int>(std::ceil(std::log2(1.0 / spec.grading_floor)));
  const double panel_abs_tol = spec.abs_tol / panels;
  QuadResult total;
  std::vector<double> sums;
  sums.reserve(panels);
  double hi = b;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + width * std::ldexp(1.0, -(k + 1));
    QuadResult r = integrate_panel(fn, lo, hi, spec, panel_abs_tol);
    sums.push_back(r.value);
    total += r;
    hi = lo;
  }
  // Geometric tail for [a, a + width 2^-panels].
  const std::size_t n = sums.size();
  if (n >= 3 && sums[n - 2] != 0.0) {
    const double rho = sums[n - 1] / sums[n - 2];
    if (rho > 0.0 && rho < 1.0) {
      const double tail = sums[n - 1] * rho / (1.0 - rho);
      double prev_tail = 0.0;
      if (sums[n - 3] != 0.0) {
        const double rho_prev = sums[n - 2] / sums[n - 3];
        if (rho_prev > 0.0 && rho_prev < 1.0) prev_tail = sums[n - 1] * rho_prev / (1.0 - rho_prev);
      }
      total.value += tail;
      total.error += std::abs(tail - prev_tail);
    } else {
      total.error += std::abs(sums[n - 1]);
    }
  }
  return total;
}

}  // namespace hhstab
