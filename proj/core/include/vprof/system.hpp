#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "vprof/gas.hpp"

namespace vprof {

/// Symmetrized Eulerian Navier-Stokes system E u_t + A(u, u_x) u_x = B u_xx
/// in primitive variables u = (rho, v, theta).
///
/// The first component is the hyperbolic one; B vanishes on its row and
/// column, and the lower 2x2 block b is positive definite.
Eigen::Matrix3d assemble_E(const GasModel& gas, const State& s);
Eigen::Matrix3d assemble_B(const GasModel& gas, const State& s);
/// The (3,2) entry carries -nu v_x / theta and the (2,3) entry does not, so
/// A is symmetric only at u_x = 0.
Eigen::Matrix3d assemble_A(const GasModel& gas, const State& s, const Gradient& g);

struct SystemBlocks {
  Eigen::Matrix3d E;
  Eigen::Matrix3d A;
  Eigen::Matrix3d B;
  double a11 = 0.0;  // A11 = a11 * v
  Eigen::Vector2d A21;
  Eigen::Matrix2d A22;
  Eigen::Matrix2d b;
  double E11 = 0.0;
  Eigen::Vector2d E21;
  Eigen::Matrix2d E22;
  int N = 3;
  int r = 2;

  /// Rebuild the full matrices (E, A, B) from the sub-blocks.
  Eigen::Matrix3d reassemble_E() const;
  Eigen::Matrix3d reassemble_A(double v) const;
  Eigen::Matrix3d reassemble_B() const;
};

SystemBlocks blocks(const GasModel& gas, const State& s, const Gradient& g);

/// Block facts of the Lagrangian formulation: the 1x1 hyperbolic block of A
/// vanishes identically and the matching block of E is positive.
struct LagrangianBlocks {
  double A11 = 0.0;
  double E11 = 1.0;
  double tau = 1.0;  // specific volume 1 / rho
};

LagrangianBlocks lagrangian_blocks(const GasModel& gas, const State& s);

/// Matrix-valued evaluators of a system in the form E u_t + A u_x = B u_xx.
/// The structure checker works on this so that defective systems can be
/// injected in tests.
struct SystemModel {
  std::string name;
  std::function<Eigen::Matrix3d(const State&)> E;
  std::function<Eigen::Matrix3d(const State&, const Gradient&)> A;
  std::function<Eigen::Matrix3d(const State&)> B;
};

SystemModel eulerian_model(const GasModel& gas);

/// Aligned plain-text rendering, one row per line.
std::string format_matrix(const Eigen::MatrixXd& m, int precision = 6);

}  // namespace vprof
