#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vprof/gas.hpp"
#include "vprof/system.hpp"

namespace vprof {

/// Numerical kernel dimension: n minus the number of singular values above
/// tol * reference. The reference defaults to the largest singular value of
/// M; callers comparing a difference of matrices pass the magnitude of the
/// terms so that exact cancellation is detected. Zero matrices give n.
int kernel_dimension(const Eigen::MatrixXd& M, double tol,
                     std::optional<double> reference = std::nullopt);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Compact box of primitive states.
struct StateBox {
  Interval rho{0.5, 2.0};
  Interval v{-1.0, 1.0};
  Interval theta{0.5, 2.0};

  /// Throws ErrorKind::config when the box is empty or leaves the
  /// admissible region (rho < c_rho or theta <= 0).
  void validate(const GasModel& gas) const;
  State center() const;
  bool contains(const State& s) const;
};

/// Reproducible uniform samples from the box.
std::vector<State> sample_box(const StateBox& box, int n, std::uint64_t seed);

struct StructureOptions {
  double symmetry_tol = 1e-12;
  double rank_tol = 1e-10;
};

struct DegeneracyVerdict {
  double sigma = 0.0;
  bool satisfied = true;
  std::vector<int> kernel_dims;
  std::vector<State> samples;
  /// Two samples with differing kernel dimensions when violated.
  std::vector<State> witnesses;
  std::vector<int> witness_dims;
};

struct StructureReport {
  std::string system;
  int n_samples = 0;

  bool e_spd = true;
  double e_min_eigenvalue = 0.0;
  double e_max_asymmetry = 0.0;

  bool a0_symmetric = true;
  double a0_max_asymmetry = 0.0;

  bool b_block_form = true;
  std::vector<int> b_ranks;
  bool b_rank_constant = true;
  int b_rank = 0;

  bool b_coercive = true;
  double c_b = 0.0;

  std::vector<DegeneracyVerdict> degeneracy;

  /// The hypotheses on E, A(u, 0) and B; the degeneracy verdicts are a
  /// finding, not a hypothesis.
  bool hypotheses_hold() const {
    return e_spd && a0_symmetric && b_block_form && b_rank_constant && b_coercive;
  }
};

/// Evaluate the structural hypotheses at the given states. Worst-case margins
/// are reduced in sample order.
StructureReport check_structure(const SystemModel& model, const std::vector<State>& samples,
                                const StructureOptions& opts = {});

/// Draws n_samples states from the box and checks the Eulerian system.
StructureReport check_structure(const GasModel& gas, const StateBox& box, int n_samples,
                                std::uint64_t seed, const StructureOptions& opts = {});

using BlockEval = std::function<Eigen::MatrixXd(const State&)>;

/// Kernel dimension of A11(u) - sigma E11(u) at every sample; satisfied iff
/// all dimensions agree.
DegeneracyVerdict check_block_linear_degeneracy(const BlockEval& A11, const BlockEval& E11,
                                                double sigma, const std::vector<State>& samples,
                                                double tol = 1e-10);

/// Hyperbolic blocks of the Eulerian system: A11 = a11 v, E11 = p_rho / (rho theta).
BlockEval eulerian_A11(const GasModel& gas);
BlockEval eulerian_E11(const GasModel& gas);
/// Hyperbolic blocks of the Lagrangian system: A11 = 0, E11 > 0.
BlockEval lagrangian_A11(const GasModel& gas);
BlockEval lagrangian_E11(const GasModel& gas);

/// Eigenvalues of E^{-1} A(u, 0) at the state, sorted ascending. These are
/// the candidate speeds at which kernel dimensions can jump.
std::vector<double> characteristic_sigmas(const GasModel& gas, const State& s);

}  // namespace vprof
