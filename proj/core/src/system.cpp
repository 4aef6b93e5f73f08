#include "vprof/system.hpp"

#include <fmt/format.h>

namespace vprof {

Eigen::Matrix3d assemble_E(const GasModel& gas, const State& s) {
  require_admissible(gas, s);
  const auto pr = pressure(gas, s.rho, s.theta);
  const double e_theta = internal_energy(gas, s.theta).e_theta;
  Eigen::Matrix3d E = Eigen::Matrix3d::Zero();
  E(0, 0) = pr.p_rho / s.rho;
  E(1, 1) = s.rho;
  E(2, 2) = s.rho * e_theta / s.theta;
  return E / s.theta;
}

Eigen::Matrix3d assemble_B(const GasModel& gas, const State& s) {
  require_admissible(gas, s);
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  B(1, 1) = gas.nu(s.rho).value;
  B(2, 2) = gas.k(s.rho).value / s.theta;
  return B / s.theta;
}

Eigen::Matrix3d assemble_A(const GasModel& gas, const State& s, const Gradient& g) {
  require_admissible(gas, s);
  const auto [p, p_rho, p_theta] = pressure(gas, s.rho, s.theta);
  const double e_theta = internal_energy(gas, s.theta).e_theta;
  const auto nu = gas.nu(s.rho);
  const auto k = gas.k(s.rho);

  Eigen::Matrix3d A;
  A(0, 0) = 0.0;
  A(0, 1) = p_rho;
  A(0, 2) = 0.0;
  A(1, 0) = p_rho;
  A(1, 1) = s.rho * s.v - nu.d_drho * g.rho_x;
  A(1, 2) = p_theta;
  A(2, 0) = 0.0;
  A(2, 1) = p_theta - nu.value * g.v_x / s.theta;
  A(2, 2) = s.rho * s.v * e_theta / s.theta - k.d_drho * g.rho_x / s.theta;
  A /= s.theta;
  // Written as a11 * v so that the block form reassembles exactly.
  A(0, 0) = p_rho / (s.theta * s.rho) * s.v;
  return A;
}

SystemBlocks blocks(const GasModel& gas, const State& s, const Gradient& g) {
  SystemBlocks sb;
  sb.E = assemble_E(gas, s);
  sb.A = assemble_A(gas, s, g);
  sb.B = assemble_B(gas, s);

  const double p_rho = pressure(gas, s.rho, s.theta).p_rho;
  sb.a11 = p_rho / (s.theta * s.rho);
  sb.A21 = sb.A.block<2, 1>(1, 0);
  sb.A22 = sb.A.block<2, 2>(1, 1);
  sb.b = sb.B.block<2, 2>(1, 1);
  sb.E11 = sb.E(0, 0);
  sb.E21 = sb.E.block<2, 1>(1, 0);
  sb.E22 = sb.E.block<2, 2>(1, 1);
  return sb;
}

Eigen::Matrix3d SystemBlocks::reassemble_E() const {
  Eigen::Matrix3d m;
  m(0, 0) = E11;
  m.block<1, 2>(0, 1) = E21.transpose();
  m.block<2, 1>(1, 0) = E21;
  m.block<2, 2>(1, 1) = E22;
  return m;
}

Eigen::Matrix3d SystemBlocks::reassemble_A(double v) const {
  Eigen::Matrix3d m;
  m(0, 0) = a11 * v;
  m.block<1, 2>(0, 1) = A21.transpose();
  m.block<2, 1>(1, 0) = A21;
  m.block<2, 2>(1, 1) = A22;
  return m;
}

Eigen::Matrix3d SystemBlocks::reassemble_B() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m.block<2, 2>(1, 1) = b;
  return m;
}

LagrangianBlocks lagrangian_blocks(const GasModel& gas, const State& s) {
  require_admissible(gas, s);
  return {0.0, 1.0, 1.0 / s.rho};
}

SystemModel eulerian_model(const GasModel& gas) {
  return {
      "eulerian-navier-stokes",
      [gas](const State& s) { return assemble_E(gas, s); },
      [gas](const State& s, const Gradient& g) { return assemble_A(gas, s, g); },
      [gas](const State& s) { return assemble_B(gas, s); },
  };
}

std::string format_matrix(const Eigen::MatrixXd& m, int precision) {
  std::string out;
  const int width = precision + 8;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out += fmt::format("{:>{}.{}g}", m(i, j), width, precision);
    out += " ]\n";
  }
  return out;
}

}  // namespace vprof
