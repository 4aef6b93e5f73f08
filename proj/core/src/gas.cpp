#include "vprof/gas.hpp"

#include <cmath>
#include <string>

#include "vprof/error.hpp"

namespace vprof {

TransportLaw::Value TransportLaw::operator()(double rho) const {
  if (exponent == 0.0) return {coeff, 0.0};
  const double value = coeff * std::pow(rho, exponent);
  return {value, exponent * value / rho};
}

void GasModel::validate() const {
  if (!(R > 0.0) || !std::isfinite(R))
    throw Error(ErrorKind::config, "gas constant R must be positive");
  if (!(gamma > 1.0) || !std::isfinite(gamma))
    throw Error(ErrorKind::config, "adiabatic exponent gamma must exceed 1");
  if (!(c_rho > 0.0))
    throw Error(ErrorKind::config, "vacuum bound c_rho must be positive");
  if (!(nu.coeff > 0.0) || !std::isfinite(nu.exponent))
    throw Error(ErrorKind::config, "viscosity coefficient must be positive");
  if (!(k.coeff > 0.0) || !std::isfinite(k.exponent))
    throw Error(ErrorKind::config, "heat conduction coefficient must be positive");
}

void require_admissible(const GasModel& gas, const State& s) {
  if (!std::isfinite(s.rho) || !std::isfinite(s.v) || !std::isfinite(s.theta))
    throw Error(ErrorKind::domain, "state has non-finite entries");
  if (s.rho < gas.c_rho)
    throw Error(ErrorKind::domain, "density " + std::to_string(s.rho) +
                                       " below vacuum bound " + std::to_string(gas.c_rho));
  if (!(s.theta > 0.0))
    throw Error(ErrorKind::domain, "temperature must be positive");
}

Pressure pressure(const GasModel& gas, double rho, double theta) {
  if (!(rho > 0.0) || !(theta > 0.0))
    throw Error(ErrorKind::domain, "pressure requires rho > 0 and theta > 0");
  return {gas.R * rho * theta, gas.R * theta, gas.R * rho};
}

InternalEnergy internal_energy(const GasModel& gas, double theta) {
  if (!(theta > 0.0))
    throw Error(ErrorKind::domain, "internal energy requires theta > 0");
  return {gas.cv() * theta, gas.cv()};
}

double sound_speed(const GasModel& gas, const State& s) {
  const auto [p, p_rho, p_theta] = pressure(gas, s.rho, s.theta);
  const double e_theta = internal_energy(gas, s.theta).e_theta;
  return std::sqrt(p_rho + s.theta * p_theta * p_theta / (s.rho * s.rho * e_theta));
}

double sound_speed_ideal(const GasModel& gas, const State& s) {
  return std::sqrt(gas.gamma * gas.R * s.theta);
}

Eigen::Vector3d euler_fluxes(const GasModel& gas, const State& s) {
  const double p = pressure(gas, s.rho, s.theta).p;
  const double e = internal_energy(gas, s.theta).e;
  const double m = s.rho * s.v;
  return {m, m * s.v + p, s.v * (0.5 * m * s.v + s.rho * e + p)};
}

Eigen::Vector3d conserved(const GasModel& gas, const State& s) {
  const double e = internal_energy(gas, s.theta).e;
  return {s.rho, s.rho * s.v, s.rho * e + 0.5 * s.rho * s.v * s.v};
}

double characteristic_speed(const GasModel& gas, const State& s, int family) {
  switch (family) {
    case 1: return s.v - sound_speed(gas, s);
    case 2: return s.v;
    case 3: return s.v + sound_speed(gas, s);
    default:
      throw Error(ErrorKind::config, "characteristic family must be 1, 2 or 3");
  }
}

}  // namespace vprof
