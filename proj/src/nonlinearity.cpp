#include "hhstab/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hhstab {

Nonlinearity Nonlinearity::exponential(double coeff, double rate) {
  if (rate == 0.0) return constant(coeff);
  return Nonlinearity(Kind::Exponential, coeff, rate, {});
}

Nonlinearity Nonlinearity::shifted_power(double coeff, double power) {
  return Nonlinearity(Kind::ShiftedPower, coeff, power, {});
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return Nonlinearity(Kind::Polynomial, 0.0, 0.0, std::move(coeffs));
}

double Nonlinearity::value(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return coeff_ * std::exp(param_ * t);
    case Kind::ShiftedPower:
      if (!(1.0 + t > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return coeff_ * std::pow(1.0 + t, param_);
    case Kind::Polynomial: {
      double acc = 0.0;
      for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
  }
  return 0.0;
}

double Nonlinearity::derivative(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return coeff_ * param_ * std::exp(param_ * t);
    case Kind::ShiftedPower:
      if (!(1.0 + t > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return coeff_ * param_ * std::pow(1.0 + t, param_ - 1.0);
    case Kind::Polynomial: {
      double acc = 0.0;
      for (std::size_t i = poly_.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * poly_[i];
      return acc;
    }
  }
  return 0.0;
}

double Nonlinearity::antiderivative(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return coeff_ * std::expm1(param_ * t) / param_;
    case Kind::ShiftedPower:
      if (!(1.0 + t > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      if (param_ == -1.0) return coeff_ * std::log1p(t);
      return coeff_ * std::expm1((param_ + 1.0) * std::log1p(t)) / (param_ + 1.0);
    case Kind::Polynomial: {
      double acc = 0.0;
      for (std::size_t i = poly_.size(); i-- > 0;) acc = acc * t + poly_[i] / static_cast<double>(i + 1);
      return acc * t;
    }
  }
  return 0.0;
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Exponential:
      os << coeff_ << "*exp(" << param_ << "*t)";
      break;
    case Kind::ShiftedPower:
      os << coeff_ << "*(1+t)^" << param_;
      break;
    case Kind::Polynomial:
      for (std::size_t i = 0; i < poly_.size(); ++i) {
        if (i) os << " + ";
        os << poly_[i];
        if (i) os << "*t^" << i;
      }
      break;
  }
  return os.str();
}

nlohmann::json Nonlinearity::to_json() const {
  switch (kind_) {
    case Kind::Exponential:
      return {{"kind", "exponential"}, {"coeff", coeff_}, {"rate", param_}};
    case Kind::ShiftedPower:
      return {{"kind", "shifted_power"}, {"coeff", coeff_}, {"power", param_}};
    case Kind::Polynomial:
      return {{"kind", "polynomial"}, {"coeffs", poly_}};
  }
  return {};
}

Nonlinearity Nonlinearity::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exponential")
    return exponential(j.at("coeff").get<double>(), j.at("rate").get<double>());
  if (kind == "shifted_power")
    return shifted_power(j.at("coeff").get<double>(), j.at("power").get<double>());
  if (kind == "polynomial") return polynomial(j.at("coeffs").get<std::vector<double>>());
  throw std::invalid_argument("Nonlinearity: unknown kind '" + kind + "'");
}

}  // namespace hhstab
