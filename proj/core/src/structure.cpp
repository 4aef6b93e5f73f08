#include "vprof/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vprof/error.hpp"

namespace vprof {

int kernel_dimension(const Eigen::MatrixXd& M, double tol, std::optional<double> reference) {
  const auto n = static_cast<int>(M.cols());
  if (M.size() == 0) return n;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  const double ref = reference.value_or(sv.size() > 0 ? sv[0] : 0.0);
  if (sv.size() == 0 || sv[0] == 0.0) return n;
  const double cut = tol * ref;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return n - rank;
}

void StateBox::validate(const GasModel& gas) const {
  for (const Interval* iv : {&rho, &v, &theta}) {
    if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->lo > iv->hi)
      throw Error(ErrorKind::config, "state box has an empty or non-finite interval");
  }
  if (rho.lo < gas.c_rho)
    throw Error(ErrorKind::config, "state box reaches below the vacuum bound c_rho");
  if (!(theta.lo > 0.0))
    throw Error(ErrorKind::config, "state box must have theta > 0");
}

State StateBox::center() const {
  return {0.5 * (rho.lo + rho.hi), 0.5 * (v.lo + v.hi), 0.5 * (theta.lo + theta.hi)};
}

bool StateBox::contains(const State& s) const {
  return s.rho >= rho.lo && s.rho <= rho.hi && s.v >= v.lo && s.v <= v.hi &&
         s.theta >= theta.lo && s.theta <= theta.hi;
}

std::vector<State> sample_box(const StateBox& box, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Map raw 53-bit draws ourselves so samples do not depend on the standard
  // library's distribution implementation.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto draw = [&](const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * unit(); };
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    State s;
    s.rho = draw(box.rho);
    s.v = draw(box.v);
    s.theta = draw(box.theta);
    out.push_back(s);
  }
  return out;
}

StructureReport check_structure(const SystemModel& model, const std::vector<State>& samples,
                                const StructureOptions& opts) {
  StructureReport rep;
  rep.system = model.name;
  rep.n_samples = static_cast<int>(samples.size());
  rep.e_min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.c_b = std::numeric_limits<double>::infinity();

  for (const State& s : samples) {
    const Eigen::Matrix3d E = model.E(s);
    const double e_asym = (E - E.transpose()).cwiseAbs().maxCoeff();
    const Eigen::Matrix3d Es = 0.5 * (E + E.transpose());
    const double e_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(Es).eigenvalues()[0];
    rep.e_max_asymmetry = std::max(rep.e_max_asymmetry, e_asym);
    rep.e_min_eigenvalue = std::min(rep.e_min_eigenvalue, e_min);

    const Eigen::Matrix3d A0 = model.A(s, Gradient{});
    rep.a0_max_asymmetry =
        std::max(rep.a0_max_asymmetry, (A0 - A0.transpose()).cwiseAbs().maxCoeff());

    const Eigen::Matrix3d B = model.B(s);
    const bool block_form = B.row(0).isZero(0.0) && B.col(0).isZero(0.0);
    rep.b_block_form = rep.b_block_form && block_form;
    rep.b_ranks.push_back(3 - kernel_dimension(B, opts.rank_tol));

    const Eigen::Matrix2d b = B.block<2, 2>(1, 1);
    const Eigen::Matrix2d bs = 0.5 * (b + b.transpose());
    rep.c_b = std::min(rep.c_b, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(bs).eigenvalues()[0]);
  }

  if (samples.empty()) {
    rep.e_min_eigenvalue = 0.0;
    rep.c_b = 0.0;
  }
  rep.e_spd = !samples.empty() && rep.e_max_asymmetry <= opts.symmetry_tol &&
              rep.e_min_eigenvalue > 0.0;
  rep.a0_symmetric = rep.a0_max_asymmetry <= opts.symmetry_tol;
  rep.b_rank = rep.b_ranks.empty() ? 0 : rep.b_ranks.front();
  rep.b_rank_constant = std::all_of(rep.b_ranks.begin(), rep.b_ranks.end(),
                                    [&](int r) { return r == rep.b_rank; });
  rep.b_coercive = !samples.empty() && rep.c_b > 0.0;
  return rep;
}

StructureReport check_structure(const GasModel& gas, const StateBox& box, int n_samples,
                                std::uint64_t seed, const StructureOptions& opts) {
  gas.validate();
  box.validate(gas);
  if (n_samples <= 0) throw Error(ErrorKind::config, "n_samples must be positive");
  return check_structure(eulerian_model(gas), sample_box(box, n_samples, seed), opts);
}

DegeneracyVerdict check_block_linear_degeneracy(const BlockEval& A11, const BlockEval& E11,
                                                double sigma, const std::vector<State>& samples,
                                                double tol) {
  if (samples.empty())
    throw Error(ErrorKind::config, "degeneracy check needs at least one sample");
  DegeneracyVerdict out;
  out.sigma = sigma;
  out.samples = samples;
  for (const State& s : samples) {
    const Eigen::MatrixXd a = A11(s);
    const Eigen::MatrixXd e = E11(s);
    const Eigen::MatrixXd M = a - sigma * e;
    // Relative to the size of the two terms: a 1x1 block has no internal
    // scale, and an exact cancellation must register as a kernel.
    const double ref = std::max(a.norm(), std::abs(sigma) * e.norm());
    out.kernel_dims.push_back(kernel_dimension(M, tol, ref));
  }
  const int first = out.kernel_dims.front();
  for (std::size_t i = 1; i < out.kernel_dims.size(); ++i) {
    if (out.kernel_dims[i] != first) {
      out.satisfied = false;
      out.witnesses = {samples.front(), samples[i]};
      out.witness_dims = {first, out.kernel_dims[i]};
      break;
    }
  }
  return out;
}

BlockEval eulerian_A11(const GasModel& gas) {
  return [gas](const State& s) {
    require_admissible(gas, s);
    const double p_rho = pressure(gas, s.rho, s.theta).p_rho;
    return Eigen::MatrixXd::Constant(1, 1, p_rho / (s.theta * s.rho) * s.v);
  };
}

BlockEval eulerian_E11(const GasModel& gas) {
  return [gas](const State& s) {
    return Eigen::MatrixXd::Constant(1, 1, assemble_E(gas, s)(0, 0));
  };
}

BlockEval lagrangian_A11(const GasModel& gas) {
  return [gas](const State& s) {
    return Eigen::MatrixXd::Constant(1, 1, lagrangian_blocks(gas, s).A11);
  };
}

BlockEval lagrangian_E11(const GasModel& gas) {
  return [gas](const State& s) {
    return Eigen::MatrixXd::Constant(1, 1, lagrangian_blocks(gas, s).E11);
  };
}

std::vector<double> characteristic_sigmas(const GasModel& gas, const State& s) {
  const Eigen::Matrix3d E = assemble_E(gas, s);
  const Eigen::Matrix3d A = assemble_A(gas, s, Gradient{});
  // E is SPD and A(u, 0) symmetric: the pencil is symmetric-definite.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(A, E);
  std::vector<double> out(3);
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vprof
