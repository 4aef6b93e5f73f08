#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vprof/reduction.hpp"

namespace vprof {

enum class Termination {
  reached_end,
  singularity_approached,
  converged_to_equilibrium,
  step_failure,
};

std::string_view to_string(Termination t) noexcept;

struct TrajectoryStats {
  int accepted = 0;
  int rejected = 0;
  long rhs_evals = 0;
  double min_abs_zeta = std::numeric_limits<double>::infinity();
  /// Sign changes of zeta between consecutive accepted samples.
  int zeta_sign_changes = 0;
  std::vector<double> sign_change_x;
};

/// Accepted samples of one integration. The integration variable (x in
/// direct mode, tau in rescaled mode) is strictly monotone; only finite
/// values are ever stored.
struct Trajectory {
  bool rescaled = false;
  std::vector<double> x;
  std::vector<double> tau;  // empty in direct mode
  std::vector<Eigen::VectorXd> states;
  Termination termination = Termination::reached_end;
  double termination_zeta = 0.0;
  TrajectoryStats stats;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  const Eigen::VectorXd& back() const { return states.back(); }
};

struct IntegratorOptions {
  double tol = 1e-10;        // absolute part of the mixed error scale
  double rel_tol = 1e-12;    // relative floor
  double guard = 1e-6;       // direct mode halts when |zeta| <= guard
  double h_init = 0.0;       // 0 selects a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  double h_min_rel = 1e-14;  // step floor relative to max(1, |t|)
  int max_steps = 200000;
  bool detect_equilibrium = true;
  double eq_tol = 1e-12;     // sup norm of the field
  int eq_dwell = 5;          // accepted steps below eq_tol before halting
  /// States failing this predicate are rejected like non-finite steps.
  std::function<bool(const Eigen::VectorXd&)> admissible;
  /// Halts with reached_end once an accepted state satisfies it.
  std::function<bool(const Eigen::VectorXd&)> stop;
};

/// Dormand-Prince 5(4) integration of dV/dx = F(V) / zeta(V) over x_span.
/// Direction follows the sign of x_span[1] - x_span[0].
/// Throws ErrorKind::singularity if |zeta(V0)| <= guard.
Trajectory integrate_direct(const SingularOde& ode, const Eigen::VectorXd& V0, double x0,
                            double x1, const IntegratorOptions& opts = {});

/// Desingularized form dV/dtau = F(V), dx/dtau = zeta(V), never dividing by
/// zeta. x is carried as an extra component starting at x0.
Trajectory integrate_rescaled(const SingularOde& ode, const Eigen::VectorXd& V0, double tau0,
                              double tau1, double x0 = 0.0, const IntegratorOptions& opts = {});

struct LinearizationReport {
  Eigen::MatrixXd J;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // columns, unit 2-norm
  double threshold = 1e-7;
  std::vector<int> stable;
  std::vector<int> unstable;
  std::vector<int> center;
};

inline constexpr double kCenterThreshold = 1e-7;

/// Central-difference Jacobian of F at V with eigen-decomposition.
/// Eigenvalues with |Re| < threshold are center directions.
LinearizationReport linearize(const SingularOde& ode, const Eigen::VectorXd& V, double h = 1e-6,
                              double threshold = kCenterThreshold);

/// Central-difference Jacobian of an arbitrary vector field.
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& V, double h);

}  // namespace vprof
