#pragma once

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "hhstab/exponents.hpp"
#include "hhstab/nonlinearity.hpp"

namespace hhstab {

/// Leading behaviour of u near the origin; decides H^1 membership analytically.
struct Asymptotics {
  enum class Kind { Regular, PowerLike, LogLike, Unknown };
  Kind kind = Kind::Unknown;
  /// u ~ r^exponent for PowerLike.
  double exponent = 0.0;
};

enum class FamilyKind { GelfandLog, WholeSpaceGelfand, Power, BrezisVazquez };

const char* to_string(FamilyKind k);

/// Kind plus the family parameter (g for Power, q for BrezisVazquez, unused otherwise).
struct FamilyDescriptor {
  FamilyKind kind;
  double parameter = 0.0;

  nlohmann::json to_json() const;
  static FamilyDescriptor from_json(const nlohmann::json& j);
};

/// Radial candidate solution on (0, 1] together with its nonlinearity.
/// Immutable after construction; evaluation is pure.
class RadialProfile {
 public:
  using Fn = std::function<double(double)>;

  RadialProfile(ProblemParams params, Fn u, Fn u_r, Nonlinearity f, std::string label,
                Asymptotics asymptotics = {});

  const ProblemParams& params() const { return params_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  const std::string& label() const { return label_; }
  const Asymptotics& asymptotics() const { return asymptotics_; }
  const std::optional<FamilyDescriptor>& descriptor() const { return descriptor_; }

  double u(double r) const { return u_(r); }
  double u_r(double r) const { return u_r_(r); }
  double f(double t) const { return f_.value(t); }
  double f_prime(double t) const { return f_.derivative(t); }
  double F(double t) const { return f_.antiderivative(t); }

  /// r^alpha f(u(r)).
  double source(double r) const;
  /// r^alpha f'(u(r)), the potential of the linearised operator.
  double weight(double r) const;

  RadialProfile with_descriptor(FamilyDescriptor d) const;

 private:
  ProblemParams params_;
  Fn u_;
  Fn u_r_;
  Nonlinearity f_;
  std::string label_;
  Asymptotics asymptotics_;
  std::optional<FamilyDescriptor> descriptor_;
};

/// u = -log r solving -Δu = (N-2)|x|^alpha e^{(2+alpha)u}. Requires N > 2.
RadialProfile gelfand_log_family(const ProblemParams& p);

/// u = -(2+alpha) log r + log((2+alpha)(N-2)) solving -Δu = |x|^alpha e^u. Requires N > 2.
RadialProfile whole_space_gelfand(const ProblemParams& p);

/// u = r^g - 1 solving -Δu = |x|^alpha (-g)(g+N-2)(1+u)^{1+(2+alpha)/(-g)}. Requires g < 0.
RadialProfile power_family(const ProblemParams& p, double g);

/// Open lower end and closed upper end of the Brezis-Vazquez q-range,
/// (-N/2 + 2 - sqrt(N-1), -N/2 + 1].
std::pair<double, double> brezis_vazquez_range(double dimension);

/// u = r^q - 1 solving -Δu = C_{N,q}(1+u)^{(q-2)/q}, C_{N,q} = -q(q+N-2).
/// Requires alpha = 0, N >= 3 and q inside brezis_vazquez_range(N).
RadialProfile brezis_vazquez_family(const ProblemParams& p, double q);

/// Rebuilds a family profile from its descriptor.
RadialProfile make_family(const ProblemParams& p, const FamilyDescriptor& d);

/// -u'' - (N-1)/r u' - r^alpha f(u), with u'' from a fourth-order central
/// stencil on u_r using the relative step h = 1e-4 r.
double pde_residual(const RadialProfile& profile, double r);

/// |pde_residual| / max(1, |r^alpha f(u(r))|).
double pde_residual_relative(const RadialProfile& profile, double r);

/// Largest relative residual over a log-spaced grid on [r_lo, r_hi].
double max_relative_residual(const RadialProfile& profile, double r_lo, double r_hi, int points);

/// Centered difference (u(r+h) - u(r-h))/(2h) - u_r(r).
double derivative_mismatch(const RadialProfile& profile, double r, double h);

struct H1Witness {
  /// Analytic verdict; empty when the asymptotics are unknown.
  std::optional<bool> analytic;
  /// ∫_eps^1 t^{N-1}(u^2 + u_r^2) dt for eps = 1e-3 and 1e-6.
  double integral_1e3 = 0.0;
  double integral_1e6 = 0.0;
  bool numeric_converges = false;
  bool verdict = false;
  std::string basis;
};

/// Decides u ∈ H^1(B_1) from the profile's asymptotics, with a numeric witness.
H1Witness is_h1(const RadialProfile& profile);

}  // namespace hhstab
