#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "vprof/gas.hpp"

namespace vprof {

/// Extended profile state U = (rho, v, theta, z1, z2) with z = (v_x, theta_x).
/// rho_x is not stored; it follows from U through reduce_w.
struct ExtendedState {
  double rho = 1.0;
  double v = 0.0;
  double theta = 1.0;
  Eigen::Vector2d z = Eigen::Vector2d::Zero();

  State state() const { return {rho, v, theta}; }
  Eigen::VectorXd vec() const;
  static ExtendedState from(const Eigen::VectorXd& u);
  static ExtendedState at_rest(const State& s) { return {s.rho, s.v, s.theta, {0.0, 0.0}}; }
};

/// dV/dx = F(V) / zeta(V) with a scalar zeta that may vanish. Evaluators
/// never divide by zeta; that policy belongs to the integrator.
struct SingularOde {
  int dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> F;
  std::function<double(const Eigen::VectorXd&)> zeta;
  std::string label;
};

inline constexpr double kDefaultSingularGuard = 1e-8;

/// rho_x recovered from the hyperbolic row: w = -A21^T z / (a11 (v - sigma)),
/// which for the ideal gas is -rho z1 / (v - sigma).
/// Throws ErrorKind::singularity when |v - sigma| <= guard.
double reduce_w(const GasModel& gas, const ExtendedState& u, double sigma,
                double guard = kDefaultSingularGuard);

/// Travelling waves of speed sigma reduced to the singular form with
/// zeta = v - sigma:
///   F_rho    = -A21^T z / a11
///   F_(v,th) = (v - sigma) z
///   F_z      = b^{-1} [ (A22 - sigma E22)(v - sigma) - A21 A21^T / a11 ] z
/// Every rho_x inside A22 enters multiplied by (v - sigma), which is
/// replaced by -rho z1 so that F depends on U alone.
SingularOde tw_singular_ode(const GasModel& gas, double sigma);

/// Steady solutions: the sigma = 0 case, zeta = v.
SingularOde steady_singular_ode(const GasModel& gas);

/// zeta(U) U' - F(U).
Eigen::VectorXd extended_residual(const SingularOde& ode, const Eigen::VectorXd& U,
                                  const Eigen::VectorXd& U_prime);

}  // namespace vprof
