#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hhstab {

/// Nonlinearity f with its derivative and the antiderivative F(t) = ∫_0^t f.
///
///   Exponential   f(t) = c e^{k t}
///   ShiftedPower  f(t) = c (1 + t)^p       (defined for t > -1)
///   Polynomial    f(t) = sum_i a_i t^i
class Nonlinearity {
 public:
  enum class Kind { Exponential, ShiftedPower, Polynomial };

  static Nonlinearity exponential(double coeff, double rate);
  static Nonlinearity shifted_power(double coeff, double power);
  static Nonlinearity polynomial(std::vector<double> coeffs);
  static Nonlinearity constant(double c) { return polynomial({c}); }

  Kind kind() const { return kind_; }
  double value(double t) const;
  double derivative(double t) const;
  double antiderivative(double t) const;

  std::string describe() const;
  nlohmann::json to_json() const;
  static Nonlinearity from_json(const nlohmann::json& j);

 private:
  Nonlinearity(Kind kind, double coeff, double param, std::vector<double> poly)
      : kind_(kind), coeff_(coeff), param_(param), poly_(std::move(poly)) {}

  Kind kind_;
  double coeff_ = 0.0;
  double param_ = 0.0;
  std::vector<double> poly_;
};

}  // namespace hhstab
