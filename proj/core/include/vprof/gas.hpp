#pragma once

#include <Eigen/Core>

namespace vprof {

/// Power law coeff * rho^exponent. exponent = 0 gives a constant coefficient.
struct TransportLaw {
  double coeff = 1.0;
  double exponent = 0.0;

  struct Value {
    double value;
    double d_drho;
  };

  Value operator()(double rho) const;
};

/// Polytropic ideal gas: p = R rho theta, e = R theta / (gamma - 1).
///
/// Viscosity and heat conduction depend on density only. The vacuum bound
/// c_rho is the lower limit every admissible state must respect.
struct GasModel {
  double R = 1.0;
  double gamma = 1.4;
  TransportLaw nu{};
  TransportLaw k{};
  double c_rho = 0.1;

  /// Throws ErrorKind::config when R <= 0, gamma <= 1, c_rho <= 0 or a
  /// transport coefficient is not positive.
  void validate() const;

  double cv() const { return R / (gamma - 1.0); }
};

struct State {
  double rho = 1.0;
  double v = 0.0;
  double theta = 1.0;

  Eigen::Vector3d vec() const { return {rho, v, theta}; }
  static State from(const Eigen::Vector3d& u) { return {u[0], u[1], u[2]}; }
};

struct Gradient {
  double rho_x = 0.0;
  double v_x = 0.0;
  double theta_x = 0.0;
};

/// Throws ErrorKind::domain unless rho >= gas.c_rho, theta > 0 and all
/// entries are finite.
void require_admissible(const GasModel& gas, const State& s);

struct Pressure {
  double p;
  double p_rho;
  double p_theta;
};

struct InternalEnergy {
  double e;
  double e_theta;
};

Pressure pressure(const GasModel& gas, double rho, double theta);
InternalEnergy internal_energy(const GasModel& gas, double theta);

/// c = sqrt(p_rho + theta p_theta^2 / (rho^2 e_theta)).
double sound_speed(const GasModel& gas, const State& s);
/// sqrt(gamma R theta); equal to sound_speed for the ideal polytropic gas.
double sound_speed_ideal(const GasModel& gas, const State& s);

/// (rho v, rho v^2 + p, v (rho v^2 / 2 + rho e + p)).
Eigen::Vector3d euler_fluxes(const GasModel& gas, const State& s);
/// (rho, rho v, rho e + rho v^2 / 2).
Eigen::Vector3d conserved(const GasModel& gas, const State& s);

/// Characteristic speeds of the Euler system: family 1 -> v - c, 2 -> v,
/// 3 -> v + c.
double characteristic_speed(const GasModel& gas, const State& s, int family);

}  // namespace vprof
