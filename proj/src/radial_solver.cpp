#include "hhstab/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace hhstab {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

void SolverConfig::validate() const {
  if (!(eps_start > 0.0 && eps_start < 1e-2)) throw std::invalid_argument("SolverConfig: eps_start must lie in (0, 1e-2)");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("SolverConfig: max_step must be positive");
  if (mesh_points < 2) throw std::invalid_argument("SolverConfig: mesh_points must be >= 2");
  if (!(m_max > 0.0)) throw std::invalid_argument("SolverConfig: m_max must be positive");
}

std::pair<double, double> series_start(const ProblemParams& p, const Nonlinearity& f, double m, double eps) {
  const double a = p.alpha();
  const double fm = f.value(m);
  const double c = -fm / ((2.0 + a) * (p.dim() + a));
  return {m + c * std::pow(eps, 2.0 + a), c * (2.0 + a) * std::pow(eps, 1.0 + a)};
}

std::vector<double> log_mesh(double eps, int points) {
  std::vector<double> mesh(static_cast<std::size_t>(points));
  const double span = std::log(eps);
  for (int i = 0; i < points; ++i) mesh[i] = std::exp(span * (1.0 - static_cast<double>(i) / (points - 1)));
  mesh.front() = eps;
  mesh.back() = 1.0;
  return mesh;
}

namespace {

struct RadialOde {
  double n, alpha, threshold;
  const Nonlinearity* f;

  void operator()(const State& x, State& dxdr, double r) const {
    if (!std::isfinite(x[0]) || std::abs(x[0]) > threshold)
      throw SolverError("radial solver: blow-up", r);
    dxdr[0] = x[1];
    dxdr[1] = -(n - 1.0) / r * x[1] - std::pow(r, alpha) * f->value(x[0]);
  }
};

double rhs_urr(const ProblemParams& p, const Nonlinearity& f, double r, double u, double ur) {
  return -(p.dim() - 1.0) / r * ur - std::pow(r, p.alpha()) * f.value(u);
}

// Cubic Hermite for u_r on [x0, x0 + h] from (u_r, u_rr) at both ends; u is
// its integral from the left node. Curvature is never recovered from
// differences of u, which lose all digits when h^2 u'' is below ulp(u).
struct SlopeHermite {
  std::array<double, 4> a;
  double x0, h, u0;

  SlopeHermite(double x0_, double h_, double y0, double d0, double s0, double d1, double s1)
      : x0(x0_), h(h_), u0(y0) {
    a[0] = d0;
    a[1] = h * s0;
    a[2] = 3.0 * (d1 - d0) - h * (2.0 * s0 + s1);
    a[3] = 2.0 * (d0 - d1) + h * (s0 + s1);
  }

  std::array<double, 3> eval(double x) const {
    const double t = (x - x0) / h;
    const double ur = a[0] + t * (a[1] + t * (a[2] + t * a[3]));
    const double dp = a[1] + t * (2.0 * a[2] + t * 3.0 * a[3]);
    const double integral = t * (a[0] + t * (a[1] / 2.0 + t * (a[2] / 3.0 + t * a[3] / 4.0)));
    return {u0 + h * integral, ur, dp / h};
  }
};

SlopeHermite interval_interpolant(const RadialSolution& sol, std::size_t i) {
  return SlopeHermite(sol.mesh[i], sol.mesh[i + 1] - sol.mesh[i], sol.u[i], sol.ur[i], sol.urr(i), sol.ur[i + 1],
                      sol.urr(i + 1));
}

std::size_t locate(const std::vector<double>& mesh, double r) {
  if (r <= mesh.front()) return 0;
  if (r >= mesh.back()) return mesh.size() - 2;
  const auto it = std::upper_bound(mesh.begin(), mesh.end(), r);
  return std::min(static_cast<std::size_t>(it - mesh.begin()) - 1, mesh.size() - 2);
}

std::string shoot_label(const ProblemParams& p, const Nonlinearity& f, double m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "shoot(N=%.12g,alpha=%.12g,m=%.17g,f=%s)", p.dim(), p.alpha(), m,
                f.describe().c_str());
  return buf;
}

}  // namespace

double RadialSolution::urr(std::size_t i) const { return rhs_urr(params, f, mesh[i], u[i], ur[i]); }

RadialProfile RadialSolution::as_profile() const {
  auto self = std::make_shared<const RadialSolution>(*this);
  const double a = params.alpha();
  const double c = std::isfinite(center_value)
                       ? -f.value(center_value) / ((2.0 + a) * (params.dim() + a))
                       : std::numeric_limits<double>::quiet_NaN();
  auto eval = [self, a, c](double r, int which) {
    if (r < self->mesh.front() && std::isfinite(self->center_value)) {
      return which == 0 ? self->center_value + c * std::pow(r, 2.0 + a) : c * (2.0 + a) * std::pow(r, 1.0 + a);
    }
    return interval_interpolant(*self, locate(self->mesh, r)).eval(r)[which];
  };
  Asymptotics as{std::isfinite(center_value) ? Asymptotics::Kind::Regular : Asymptotics::Kind::Unknown, 0.0};
  return RadialProfile(
      params, [eval](double r) { return eval(r, 0); }, [eval](double r) { return eval(r, 1); }, f, label, as);
}

nlohmann::json RadialSolution::metadata() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["label"] = label;
  j["params"] = {{"N", params.dim()}, {"alpha", params.alpha()}};
  j["f"] = f.to_json();
  j["center_value"] = std::isfinite(center_value) ? nlohmann::json(center_value) : nlohmann::json(nullptr);
  j["mesh"] = {{"points", mesh.size()}, {"r_min", mesh.front()}, {"r_max", mesh.back()}};
  j["u_at_1"] = u.back();
  j["stats"] = {{"steps", stats.steps},
                {"error_estimate", stats.error_estimate},
                {"max_midpoint_residual", stats.max_midpoint_residual},
                {"shots", stats.shots}};
  return j;
}

void RadialSolution::write_csv(std::ostream& os) const {
  os << "r,u,u_r\n";
  char buf[96];
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", mesh[i], u[i], ur[i]);
    os << buf;
  }
}

namespace {

auto make_stepper(const SolverConfig& cfg) {
  return odeint::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_step, odeint::runge_kutta_dopri5<State>());
}

}  // namespace

RadialSolution shoot(const ProblemParams& p, const Nonlinearity& f, double m, const SolverConfig& cfg) {
  cfg.validate();
  RadialSolution sol{p, f, log_mesh(cfg.eps_start, cfg.mesh_points), {}, {}, m, {}, shoot_label(p, f, m)};
  sol.u.reserve(sol.mesh.size());
  sol.ur.reserve(sol.mesh.size());

  const auto [u0, ur0] = series_start(p, f, m, cfg.eps_start);
  State x{u0, ur0};
  RadialOde ode{p.dim(), p.alpha(), cfg.blowup_threshold, &f};
  double umax = std::abs(u0);
  auto observer = [&](const State& s, double) {
    sol.u.push_back(s[0]);
    sol.ur.push_back(s[1]);
    umax = std::max(umax, std::abs(s[0]));
  };
  try {
    sol.stats.steps = static_cast<long>(odeint::integrate_times(make_stepper(cfg), ode, x, sol.mesh.begin(),
                                                                sol.mesh.end(), 1e-2 * cfg.eps_start, observer));
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    const double r = sol.u.empty() ? cfg.eps_start : sol.mesh[sol.u.size() - 1];
    throw SolverError(std::string("radial solver: integrator failure: ") + e.what(), r);
  }
  sol.stats.error_estimate = static_cast<double>(sol.stats.steps) * (cfg.abs_tol + cfg.rel_tol * umax);
  sol.stats.max_midpoint_residual = midpoint_residual(sol);
  return sol;
}

double shoot_endpoint(const ProblemParams& p, const Nonlinearity& f, double m, const SolverConfig& cfg) {
  cfg.validate();
  const auto [u0, ur0] = series_start(p, f, m, cfg.eps_start);
  State x{u0, ur0};
  RadialOde ode{p.dim(), p.alpha(), cfg.blowup_threshold, &f};
  const std::array<double, 2> times{cfg.eps_start, 1.0};
  double end = std::nan("");
  try {
    odeint::integrate_times(make_stepper(cfg), ode, x, times.begin(), times.end(), 1e-2 * cfg.eps_start,
                            [&](const State& s, double) { end = s[0]; });
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(std::string("radial solver: integrator failure: ") + e.what(), std::nan(""));
  }
  return end;
}

RadialSolution solve_gelfand_branch(const ProblemParams& p, double lambda, const SolverConfig& cfg) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_gelfand_branch: requires lambda > 0");
  cfg.validate();
  const Nonlinearity f = Nonlinearity::exponential(lambda, 1.0);
  auto end_value = [&](double m) { return shoot_endpoint(p, f, m, cfg); };

  int shots = 1;
  double m_lo = 0.0;
  double g_lo = end_value(0.0);
  if (g_lo == 0.0) {
    RadialSolution sol = shoot(p, f, 0.0, cfg);
    sol.stats.shots = shots + 1;
    return sol;
  }
  // Finer steps where the minimal branch usually lives.
  auto next_m = [](double m) { return m < 1.0 ? m + 0.01 : (m < 5.0 ? m + 0.05 : m + 0.25); };
  double m_hi = next_m(m_lo);
  double g_hi = 0.0;
  bool bracketed = false;
  for (; m_hi <= cfg.m_max + 1e-12; m_hi = next_m(m_hi)) {
    g_hi = end_value(m_hi);
    ++shots;
    if ((g_lo < 0.0) != (g_hi < 0.0) || g_hi == 0.0) {
      bracketed = true;
      break;
    }
    m_lo = m_hi;
    g_lo = g_hi;
  }
  if (!bracketed)
    throw SolverError("solve_gelfand_branch: no sign change of u(1; m) for m in [0, m_max]; "
                      "lambda lies beyond the explored branch",
                      1.0);

  double root = m_hi;
  if (g_hi != 0.0) {
    boost::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [&](double m) {
          ++shots;
          return end_value(m);
        },
        m_lo, m_hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(52), iters);
    root = 0.5 * (bracket.first + bracket.second);
  }
  RadialSolution sol = shoot(p, f, root, cfg);
  char buf[160];
  std::snprintf(buf, sizeof buf, "gelfand_branch(N=%.12g,alpha=%.12g,lambda=%.17g)", p.dim(), p.alpha(), lambda);
  sol.label = buf;
  sol.stats.shots = shots + 1;
  return sol;
}

RadialSolution sample_profile(const RadialProfile& prof, const SolverConfig& cfg) {
  cfg.validate();
  RadialSolution sol{prof.params(), prof.nonlinearity(), log_mesh(cfg.eps_start, cfg.mesh_points), {}, {},
                     std::numeric_limits<double>::quiet_NaN(), {}, prof.label()};
  for (double r : sol.mesh) {
    sol.u.push_back(prof.u(r));
    sol.ur.push_back(prof.u_r(r));
  }
  sol.stats.steps = 0;
  sol.stats.shots = 0;
  return sol;
}

double midpoint_residual(const RadialSolution& sol) {
  double worst = 0.0;
  const double n = sol.params.dim();
  for (std::size_t i = 0; i + 1 < sol.mesh.size(); ++i) {
    const double r = 0.5 * (sol.mesh[i] + sol.mesh[i + 1]);
    const auto [u, ur, urr] = interval_interpolant(sol, i).eval(r);
    const double src = std::pow(r, sol.params.alpha()) * sol.f.value(u);
    const double damp = (n - 1.0) / r * ur;
    // Same normalisation as pde_residual_relative for closed-form profiles.
    worst = std::max(worst, std::abs(-urr - damp - src) / std::max(1.0, std::abs(src)));
  }
  return worst;
}

SignReport derivative_sign_profile(const RadialSolution& sol) {
  SignReport rep;
  double umag = 0.0, urmax = 0.0;
  for (double v : sol.u) umag = std::max(umag, std::abs(v));
  for (double v : sol.ur) urmax = std::max(urmax, std::abs(v));
  if (urmax <= 1e-14 * std::max(1.0, umag)) {
    rep.constant = true;
    return rep;
  }
  rep.min_abs_ur = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sol.ur.size(); ++i) {
    rep.min_abs_ur = std::min(rep.min_abs_ur, std::abs(sol.ur[i]));
    if ((sol.ur[i - 1] < 0.0 && sol.ur[i] > 0.0) || (sol.ur[i - 1] > 0.0 && sol.ur[i] < 0.0) ||
        (i > 1 && sol.ur[i - 1] == 0.0))
      rep.sign_changes.emplace_back(sol.mesh[i - 1], sol.mesh[i]);
  }
  rep.sign = sol.ur.back() > 0.0 ? 1 : (sol.ur.back() < 0.0 ? -1 : 0);
  return rep;
}

}  // namespace hhstab
