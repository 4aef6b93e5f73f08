#include "vprof/reduction.hpp"

#include <cmath>

#include "vprof/error.hpp"

namespace vprof {

Eigen::VectorXd ExtendedState::vec() const {
  Eigen::VectorXd u(5);
  u << rho, v, theta, z[0], z[1];
  return u;
}

ExtendedState ExtendedState::from(const Eigen::VectorXd& u) {
  return {u[0], u[1], u[2], {u[3], u[4]}};
}

double reduce_w(const GasModel& gas, const ExtendedState& u, double sigma, double guard) {
  const double zeta = u.v - sigma;
  if (!(std::abs(zeta) > guard))
    throw Error(ErrorKind::singularity, "reduce_w: |v - sigma| within the singularity guard");
  const double p_rho = gas.R * u.theta;
  const double a11 = p_rho / (u.theta * u.rho);
  const double A21_dot_z = p_rho / u.theta * u.z[0];
  return -A21_dot_z / (a11 * zeta);
}

namespace {

// Pure arithmetic on the raw vector: no admissibility checks here so the
// integrator sees non-finite values, not exceptions, when it strays.
Eigen::VectorXd tw_rhs(const GasModel& gas, double sigma, const Eigen::VectorXd& U) {
  const double rho = U[0];
  const double v = U[1];
  const double theta = U[2];
  const double z1 = U[3];
  const double z2 = U[4];
  const double zeta = v - sigma;

  const double p_rho = gas.R * theta;
  const double p_theta = gas.R * rho;
  const double e_theta = gas.cv();
  const auto nu = gas.nu(rho);
  const auto k = gas.k(rho);

  const double a11 = p_rho / (theta * rho);
  const double A21_dot_z = p_rho / theta * z1;
  const double F_rho = -A21_dot_z / a11;
  // rho_x * zeta, the combination that appears in (A22 - sigma E22) zeta.
  const double rho_x_zeta = F_rho;

  // M = (A22 - sigma E22) zeta - A21 A21^T / a11
  const double m11 = (rho * zeta * zeta - nu.d_drho * rho_x_zeta) / theta - p_rho * rho / theta;
  const double m12 = p_theta * zeta / theta;
  const double m21 = (p_theta - nu.value * z1 / theta) * zeta / theta;
  const double m22 = (rho * zeta * zeta * e_theta / theta - k.d_drho * rho_x_zeta / theta) / theta;

  // b^{-1} = diag(theta / nu, theta^2 / k)
  Eigen::VectorXd F(5);
  F[0] = F_rho;
  F[1] = zeta * z1;
  F[2] = zeta * z2;
  F[3] = theta / nu.value * (m11 * z1 + m12 * z2);
  F[4] = theta * theta / k.value * (m21 * z1 + m22 * z2);
  return F;
}

}  // namespace

SingularOde tw_singular_ode(const GasModel& gas, double sigma) {
  SingularOde ode;
  ode.dim = 5;
  ode.F = [gas, sigma](const Eigen::VectorXd& U) { return tw_rhs(gas, sigma, U); };
  ode.zeta = [sigma](const Eigen::VectorXd& U) { return U[1] - sigma; };
  ode.label = sigma == 0.0 ? "steady" : "travelling(" + std::to_string(sigma) + ")";
  return ode;
}

SingularOde steady_singular_ode(const GasModel& gas) {
  SingularOde ode = tw_singular_ode(gas, 0.0);
  ode.label = "steady";
  return ode;
}

Eigen::VectorXd extended_residual(const SingularOde& ode, const Eigen::VectorXd& U,
                                  const Eigen::VectorXd& U_prime) {
  return ode.zeta(U) * U_prime - ode.F(U);
}

}  // namespace vprof
