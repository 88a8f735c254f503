#include "hhstab/families.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hhstab/quadrature.hpp"

namespace hhstab {

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::GelfandLog: return "gelfand_log";
    case FamilyKind::WholeSpaceGelfand: return "whole_space_gelfand";
    case FamilyKind::Power: return "power";
    case FamilyKind::BrezisVazquez: return "brezis_vazquez";
  }
  return "?";
}

nlohmann::json FamilyDescriptor::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)}};
  if (kind == FamilyKind::Power) j["g"] = parameter;
  if (kind == FamilyKind::BrezisVazquez) j["q"] = parameter;
  return j;
}

FamilyDescriptor FamilyDescriptor::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gelfand_log") return {FamilyKind::GelfandLog, 0.0};
  if (kind == "whole_space_gelfand") return {FamilyKind::WholeSpaceGelfand, 0.0};
  if (kind == "power") return {FamilyKind::Power, j.at("g").get<double>()};
  if (kind == "brezis_vazquez") return {FamilyKind::BrezisVazquez, j.at("q").get<double>()};
  throw std::invalid_argument("FamilyDescriptor: unknown kind '" + kind + "'");
}

RadialProfile::RadialProfile(ProblemParams params, Fn u, Fn u_r, Nonlinearity f, std::string label,
                             Asymptotics asymptotics)
    : params_(params),
      u_(std::move(u)),
      u_r_(std::move(u_r)),
      f_(std::move(f)),
      label_(std::move(label)),
      asymptotics_(asymptotics) {}

double RadialProfile::source(double r) const {
  return std::pow(r, params_.alpha()) * f_.value(u_(r));
}

double RadialProfile::weight(double r) const {
  return std::pow(r, params_.alpha()) * f_.derivative(u_(r));
}

RadialProfile RadialProfile::with_descriptor(FamilyDescriptor d) const {
  RadialProfile copy = *this;
  copy.descriptor_ = d;
  return copy;
}

namespace {

std::string label_of(const char* name, const ProblemParams& p, const char* extra = nullptr,
                     double value = 0.0) {
  std::ostringstream os;
  os.precision(12);
  os << name << "(N=" << p.dim() << ",alpha=" << p.alpha();
  if (extra) os << "," << extra << "=" << value;
  os << ")";
  return os.str();
}

void require_above_two(const ProblemParams& p, const char* what) {
  if (!(p.dim() > 2.0))
    throw std::invalid_argument(std::string(what) + ": requires N > 2 (the (N-2) factor vanishes)");
}

}  // namespace

RadialProfile gelfand_log_family(const ProblemParams& p) {
  require_above_two(p, "gelfand_log_family");
  const double a = p.alpha();
  RadialProfile prof(
      p, [](double r) { return -std::log(r); }, [](double r) { return -1.0 / r; },
      Nonlinearity::exponential(p.dim() - 2.0, 2.0 + a), label_of("gelfand_log", p),
      {Asymptotics::Kind::LogLike, 0.0});
  return prof.with_descriptor({FamilyKind::GelfandLog, 0.0});
}

RadialProfile whole_space_gelfand(const ProblemParams& p) {
  require_above_two(p, "whole_space_gelfand");
  const double k = 2.0 + p.alpha();
  const double shift = std::log(k * (p.dim() - 2.0));
  RadialProfile prof(
      p, [k, shift](double r) { return -k * std::log(r) + shift; }, [k](double r) { return -k / r; },
      Nonlinearity::exponential(1.0, 1.0), label_of("whole_space_gelfand", p),
      {Asymptotics::Kind::LogLike, 0.0});
  return prof.with_descriptor({FamilyKind::WholeSpaceGelfand, 0.0});
}

RadialProfile power_family(const ProblemParams& p, double g) {
  if (!(g < 0.0)) throw std::invalid_argument("power_family: requires g < 0");
  const double coeff = -g * (g + p.dim() - 2.0);
  const double expo = 1.0 + (2.0 + p.alpha()) / (-g);
  RadialProfile prof(
      p, [g](double r) { return std::pow(r, g) - 1.0; },
      [g](double r) { return g * std::pow(r, g - 1.0); }, Nonlinearity::shifted_power(coeff, expo),
      label_of("power", p, "g", g), {Asymptotics::Kind::PowerLike, g});
  return prof.with_descriptor({FamilyKind::Power, g});
}

std::pair<double, double> brezis_vazquez_range(double n) {
  return {-0.5 * n + 2.0 - std::sqrt(n - 1.0), -0.5 * n + 1.0};
}

RadialProfile brezis_vazquez_family(const ProblemParams& p, double q) {
  if (p.alpha() != 0.0) throw std::invalid_argument("brezis_vazquez_family: only alpha = 0 is defined");
  if (!(p.dim() >= 3.0)) throw std::invalid_argument("brezis_vazquez_family: requires N >= 3");
  const auto [lo, hi] = brezis_vazquez_range(p.dim());
  if (!(q > lo && q <= hi)) throw std::invalid_argument("brezis_vazquez_family: q outside (-N/2+2-sqrt(N-1), -N/2+1]");
  const double c = -q * (q + p.dim() - 2.0);
  RadialProfile prof(
      p, [q](double r) { return std::pow(r, q) - 1.0; },
      [q](double r) { return q * std::pow(r, q - 1.0); },
      Nonlinearity::shifted_power(c, (q - 2.0) / q), label_of("brezis_vazquez", p, "q", q),
      {Asymptotics::Kind::PowerLike, q});
  return prof.with_descriptor({FamilyKind::BrezisVazquez, q});
}

RadialProfile make_family(const ProblemParams& p, const FamilyDescriptor& d) {
  switch (d.kind) {
    case FamilyKind::GelfandLog: return gelfand_log_family(p);
    case FamilyKind::WholeSpaceGelfand: return whole_space_gelfand(p);
    case FamilyKind::Power: return power_family(p, d.parameter);
    case FamilyKind::BrezisVazquez: return brezis_vazquez_family(p, d.parameter);
  }
  throw std::invalid_argument("make_family: unknown kind");
}

double pde_residual(const RadialProfile& prof, double r) {
  const double h = 1e-4 * r;
  const double urr = (-prof.u_r(r + 2.0 * h) + 8.0 * prof.u_r(r + h) - 8.0 * prof.u_r(r - h) +
                      prof.u_r(r - 2.0 * h)) /
                     (12.0 * h);
  const double n = prof.params().dim();
  return -urr - (n - 1.0) / r * prof.u_r(r) - prof.source(r);
}

double pde_residual_relative(const RadialProfile& prof, double r) {
  return std::abs(pde_residual(prof, r)) / std::max(1.0, std::abs(prof.source(r)));
}

double max_relative_residual(const RadialProfile& prof, double r_lo, double r_hi, int points) {
  double worst = 0.0;
  const double ratio = std::log(r_hi / r_lo);
  for (int i = 0; i < points; ++i) {
    const double r = points == 1 ? r_hi : r_lo * std::exp(ratio * i / (points - 1));
    worst = std::max(worst, pde_residual_relative(prof, r));
  }
  return worst;
}

double derivative_mismatch(const RadialProfile& prof, double r, double h) {
  return (prof.u(r + h) - prof.u(r - h)) / (2.0 * h) - prof.u_r(r);
}

H1Witness is_h1(const RadialProfile& prof) {
  H1Witness w;
  const double n = prof.params().dim();
  const auto& as = prof.asymptotics();
  switch (as.kind) {
    case Asymptotics::Kind::Regular:
      w.analytic = true;
      w.basis = "regular at the origin";
      break;
    case Asymptotics::Kind::PowerLike:
      // u_r ~ g r^{g-1}: t^{N-1} u_r^2 ~ t^{N-3+2g} is integrable iff g > 1 - N/2;
      // the u^2 term needs only N + 2g > 0, which is then implied.
      w.analytic = as.exponent >= 0.0 || as.exponent > 1.0 - 0.5 * n;
      w.basis = "power behaviour: H^1 iff g > 1 - N/2";
      break;
    case Asymptotics::Kind::LogLike:
      w.analytic = n > 2.0;
      w.basis = "logarithmic behaviour: H^1 iff N > 2";
      break;
    case Asymptotics::Kind::Unknown:
      w.basis = "undecidable-analytically; numeric trend";
      break;
  }
  auto integrand = [&](double t) {
    const double u = prof.u(t), ur = prof.u_r(t);
    return std::pow(t, n - 1.0) * (u * u + ur * ur);
  };
  QuadratureSpec q = QuadratureSpec::graded();
  q.rel_tol = 1e-10;
  w.integral_1e3 = integrate(integrand, 1e-3, 1.0, q).value;
  w.integral_1e6 = w.integral_1e3 + integrate(integrand, 1e-6, 1e-3, q).value;
  const double tail = w.integral_1e6 - w.integral_1e3;
  w.numeric_converges = std::isfinite(w.integral_1e6) && tail <= 1e-2 * std::max(w.integral_1e3, 1e-300);
  w.verdict = w.analytic.value_or(w.numeric_converges);
  return w;
}

}  // namespace hhstab
