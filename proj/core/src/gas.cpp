#include "sspf/gas.hpp"

#include <cmath>
#include <string>

#include "sspf/error.hpp"

namespace sspf {

void GasModel::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(c0) || !std::isfinite(rho0) ||
      !std::isfinite(bernoulli_A)) {
    throw PreconditionError("gas parameters must be finite");
  }
  if (c0 <= 0.0) throw PreconditionError("gas: c0 must be positive");
  if (rho0 <= 0.0) throw PreconditionError("gas: rho0 must be positive");
}

void GasModel::require_ellipticity_range() const {
  validate();
  if (!(gamma > -1.0)) {
    throw PreconditionError("ellipticity analysis requires gamma > -1, got " +
                            std::to_string(gamma));
  }
}

namespace {

void require_positive_density(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidStateError("density must be positive, got " + std::to_string(rho));
  }
}

}  // namespace

double pressure(const GasModel& gas, double rho) {
  require_positive_density(rho);
  if (gas.gamma == 0.0) throw PreconditionError("pressure law undefined for gamma == 0");
  return gas.c0 * gas.c0 * gas.rho0 / gas.gamma * std::pow(rho / gas.rho0, gas.gamma);
}

double enthalpy(const GasModel& gas, double rho) {
  require_positive_density(rho);
  const double c02 = gas.c0 * gas.c0;
  if (gas.isothermal()) return c02 * std::log(rho / gas.rho0);
  return c02 / (gas.gamma - 1.0) * std::pow(rho / gas.rho0, gas.gamma - 1.0);
}

double sound_speed_sq_of_density(const GasModel& gas, double rho) {
  require_positive_density(rho);
  return gas.c0 * gas.c0 * std::pow(rho / gas.rho0, gas.gamma - 1.0);
}

EosState eval_eos(const GasModel& gas, double rho) {
  EosState s;
  if (gas.gamma != 0.0) s.pressure = pressure(gas, rho);
  s.pi = enthalpy(gas, rho);
  s.c2 = sound_speed_sq_of_density(gas, rho);
  return s;
}

double pi_inverse(const GasModel& gas, double w) {
  const double c02 = gas.c0 * gas.c0;
  if (!std::isfinite(w)) throw InvalidStateError("pi_inverse: non-finite argument");
  if (gas.isothermal()) return gas.rho0 * std::exp(w / c02);
  const double base = w * (gas.gamma - 1.0) / c02;
  if (!(base > 0.0)) {
    throw InvalidStateError("pi_inverse: w = " + std::to_string(w) +
                            " outside the range of pi (vacuum)");
  }
  return gas.rho0 * std::pow(base, 1.0 / (gas.gamma - 1.0));
}

double sound_speed_sq_raw(const GasModel& gas, double chi,
                          std::span<const double> grad_chi) noexcept {
  if (gas.isothermal()) return gas.c0 * gas.c0;
  double q2 = 0.0;
  for (double g : grad_chi) q2 += g * g;
  return (gas.gamma - 1.0) * (gas.bernoulli_A - chi - 0.5 * q2);
}

double sound_speed_sq(const GasModel& gas, double chi, std::span<const double> grad_chi) {
  const double c2 = sound_speed_sq_raw(gas, chi, grad_chi);
  if (!(c2 > 0.0) || !std::isfinite(c2)) {
    throw InvalidStateError("nonpositive sound speed squared c^2 = " + std::to_string(c2));
  }
  return c2;
}

double density(const GasModel& gas, double chi, std::span<const double> grad_chi) {
  double q2 = 0.0;
  for (double g : grad_chi) q2 += g * g;
  return pi_inverse(gas, gas.bernoulli_A - chi - 0.5 * q2);
}

std::string_view to_string(FlowType type) noexcept {
  switch (type) {
    case FlowType::Elliptic:
      return "elliptic";
    case FlowType::Parabolic:
      return "parabolic";
    case FlowType::Hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

FlowType classify_mach(double L, double tol_L) noexcept {
  if (L < 1.0 - tol_L) return FlowType::Elliptic;
  if (L > 1.0 + tol_L) return FlowType::Hyperbolic;
  return FlowType::Parabolic;
}

Classification pseudo_mach_classify(std::span<const double> grad_chi, double c2, double tol_L) {
  if (!(c2 > 0.0) || !std::isfinite(c2)) {
    throw InvalidStateError("pseudo-Mach number needs c^2 > 0, got " + std::to_string(c2));
  }
  double q2 = 0.0;
  for (double g : grad_chi) q2 += g * g;
  const double L = std::sqrt(q2 / c2);
  return {L, classify_mach(L, tol_L)};
}

}  // namespace sspf
