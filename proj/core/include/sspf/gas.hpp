#ifndef SSPF_GAS_HPP_
#define SSPF_GAS_HPP_

#include <optional>
#include <span>
#include <string_view>

namespace sspf {

/// Polytropic gas p = (c0^2 rho0 / gamma) (rho/rho0)^gamma together with the
/// self-similar Bernoulli constant A. The pressure law needs gamma != 0; the
/// ellipticity machinery additionally needs gamma > -1.
struct GasModel {
  double gamma = 1.4;
  double c0 = 1.0;
  double rho0 = 1.0;
  double bernoulli_A = 0.0;

  bool isothermal() const noexcept { return gamma == 1.0; }

  /// Throws PreconditionError unless c0 > 0 and rho0 > 0 (and all finite).
  void validate() const;

  /// Throws PreconditionError unless gamma > -1.
  void require_ellipticity_range() const;
};

struct EosState {
  /// Empty for gamma == 0, where the pressure law is not defined.
  std::optional<double> pressure;
  double pi = 0.0;
  double c2 = 0.0;
};

EosState eval_eos(const GasModel& gas, double rho);

double pressure(const GasModel& gas, double rho);

/// Enthalpy-like potential pi(rho); logarithmic branch for gamma == 1.
double enthalpy(const GasModel& gas, double rho);

double sound_speed_sq_of_density(const GasModel& gas, double rho);

double pi_inverse(const GasModel& gas, double w);

/// Raw Bernoulli value (gamma-1)(A - chi - |grad chi|^2/2), or c0^2 when
/// isothermal. May be nonpositive; callers that need a valid state use
/// sound_speed_sq().
double sound_speed_sq_raw(const GasModel& gas, double chi,
                          std::span<const double> grad_chi) noexcept;

/// Same as sound_speed_sq_raw() but throws InvalidStateError when c^2 <= 0.
double sound_speed_sq(const GasModel& gas, double chi, std::span<const double> grad_chi);

/// d(c^2)/d(chi); the derivative with respect to grad chi component k is
/// dc2_dchi * grad_chi[k].
inline double dc2_dchi(const GasModel& gas) noexcept {
  return gas.isothermal() ? 0.0 : 1.0 - gas.gamma;
}

/// Density of the self-similar state, pi^{-1}(A - chi - |grad chi|^2/2).
double density(const GasModel& gas, double chi, std::span<const double> grad_chi);

enum class FlowType { Elliptic, Parabolic, Hyperbolic };

std::string_view to_string(FlowType type) noexcept;

inline constexpr double kDefaultTolL = 1e-6;

struct Classification {
  double L = 0.0;
  FlowType type = FlowType::Elliptic;
};

FlowType classify_mach(double L, double tol_L = kDefaultTolL) noexcept;

/// Pseudo-Mach number L = |grad chi| / c and its type tag.
Classification pseudo_mach_classify(std::span<const double> grad_chi, double c2,
                                    double tol_L = kDefaultTolL);

}  // namespace sspf

#endif  // SSPF_GAS_HPP_
