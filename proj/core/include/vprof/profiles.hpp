#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vprof/gas.hpp"
#include "vprof/reduction.hpp"
#include "vprof/sode.hpp"
#include "vprof/structure.hpp"

namespace vprof {

// ---------------------------------------------------------------------------
// Rankine-Hugoniot endpoints
// ---------------------------------------------------------------------------

/// [f(U+) - f(U-)] - sigma [g(U+) - g(U-)] with f the Euler fluxes and g the
/// conserved quantities.
Eigen::Vector3d rh_residual(const GasModel& gas, const State& minus, const State& plus,
                            double sigma);

/// Shock endpoints for an acoustic family (1 or 3). The speed is
/// sigma = lambda_family(U-) - strength with strength >= 0.
struct RHPair {
  State minus;
  State plus;
  double sigma = 0.0;
  int family = 1;
  double strength = 0.0;
};

struct RhOptions {
  int max_iter = 60;
  double tol = 1e-10;            // accepted sup-norm RH residual
  std::optional<StateBox> box;   // iterates must stay inside when set
};

/// Newton iteration on (rho+, v+, theta+) with the speed fixed by the
/// strength normalization. The trivial root U+ = U- is deflated away.
/// Throws ErrorKind::config for family 2 or negative strength,
/// ErrorKind::admissibility when the root leaves the admissible region and
/// ErrorKind::no_convergence when Newton stalls or lands on a non-Lax state.
RHPair solve_rh(const GasModel& gas, const State& minus, int family, double strength,
                const RhOptions& opts = {});

/// lambda_k(U+) < sigma < lambda_k(U-).
bool lax_admissible(const GasModel& gas, const RHPair& pair);

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

enum class ProfileKind { shock, boundary_layer };

struct ProfileDiagnostics {
  double rh_residual = 0.0;
  double flux_drift = 0.0;       // sup relative drift of (m, Pi, E)
  double extended_residual = 0.0;
  double oracle_deviation = std::numeric_limits<double>::quiet_NaN();
  std::string termination;
  std::string shooting;          // which endpoint and sign produced the orbit
  int zeta_sign_changes = 0;
  double min_abs_zeta = std::numeric_limits<double>::infinity();
  bool rescaled = false;
};

/// Sampled viscous profile over extended states (rho, v, theta, z1, z2),
/// x increasing. For shocks left/right are U-/U+; for boundary layers left
/// is the trace at x = 0 and right the limit state.
struct Profile {
  ProfileKind kind = ProfileKind::shock;
  double sigma = 0.0;
  State left;
  State right;
  Trajectory trajectory;
  ProfileDiagnostics diagnostics;
};

struct ShootOptions {
  double eps = 1e-6;       // start offset relative to the jump size
  double end_tol = 1e-6;   // scaled sup-norm acceptance at the far endpoint
  double x_budget = 2000.0;
  double fd_step = 1e-6;
  IntegratorOptions integrator = default_integrator();

  static IntegratorOptions default_integrator() {
    IntegratorOptions o;
    o.h_max = 0.05;
    return o;
  }
};

/// Heteroclinic orbit of the travelling-wave singular ODE joining (U-, 0)
/// to (U+, 0). Shooting starts on the one-dimensional unstable manifold of
/// (U-, 0) when it exists, otherwise runs backward along the
/// one-dimensional stable manifold of (U+, 0); both signs are tried.
/// Throws ErrorKind::no_connection or ErrorKind::singularity.
Profile shock_profile(const GasModel& gas, const RHPair& pair, const ShootOptions& opts = {});

/// Per-sample deviation of (m, Pi, E) from the values at the reference
/// endpoint (U- for shocks, the limit state for layers), where
///   m  = rho (v - sigma)
///   Pi = m v + p - nu v_x
///   E  = m (e + v^2/2) + v p - k theta_x - nu v v_x.
std::vector<Eigen::Vector3d> flux_constants(const GasModel& gas, const Profile& profile);

/// max_i |drift_i| / max(1, |reference_i|) over all samples.
double flux_drift(const GasModel& gas, const Profile& profile);

/// Max sup-norm of zeta(U) U' - F(U) over the samples, with U' taken from
/// the right-hand side of the integrated system.
double max_extended_residual(const SingularOde& ode, const Profile& profile);

/// Independent travelling-wave solution from the integrated conservation
/// laws in (v, theta):
///   nu v'    = m v + p - Pi
///   k theta' = m (e + v^2/2) + v p - nu v v' - E
/// with rho = m / (v - sigma). Shares nothing with the symmetrized system.
struct GilbargOracle {
  double sigma = 0.0;
  double m = 0.0;
  double Pi = 0.0;
  double E = 0.0;
  Trajectory trajectory;  // states are (v, theta)
  std::string shooting;
};

GilbargOracle gilbarg_oracle(const GasModel& gas, const RHPair& pair,
                             const ShootOptions& opts = {});

/// Right-hand side (v', theta') of the oracle system.
Eigen::Vector2d gilbarg_rhs(const GasModel& gas, const GilbargOracle& oracle,
                            const Eigen::Vector2d& vt);

/// Oracle samples lifted to extended states: rho reconstructed, z from the
/// oracle right-hand side.
Profile oracle_profile(const GasModel& gas, const RHPair& pair, const GilbargOracle& oracle);

/// Max sup-norm of extended_residual(ode, U, U') over the oracle samples,
/// with U' obtained by differentiating the oracle solution.
double oracle_reduction_residual(const GasModel& gas, const GilbargOracle& oracle,
                                 const SingularOde& ode);

/// Sup deviation of the non-matching components after reparametrizing both
/// profiles by component `matching` (default v). Throws
/// ErrorKind::non_monotone if that component is not strictly monotone.
double compare_profiles(const Profile& a, const Profile& b, int matching = 1);

struct LayerOptions {
  double amplitude = 1e-3;       // signed offset along the decaying direction
  double length = 20.0;          // x budget of the backward integration
  double max_departure = 0.5;    // stop once |U - U_limit| reaches this
  double rescaled_tau = 200.0;
  double fd_step = 1e-6;
  IntegratorOptions integrator = ShootOptions::default_integrator();
};

/// Stable non-center directions of the steady field at (limit, 0), ordered
/// by increasing decay rate in x. Empty when none exist.
std::vector<Eigen::VectorXd> decaying_directions(const GasModel& gas, const State& limit,
                                                 double fd_step = 1e-6);

/// Steady solution on [0, L] approaching `limit` as x -> L, built by
/// integrating backward from limit + amplitude * r. Falls back to the
/// rescaled integrator when the direct one approaches v = 0.
/// Throws ErrorKind::no_decaying_direction.
Profile boundary_layer(const GasModel& gas, const State& limit, int direction_index,
                       const LayerOptions& opts = {});

/// Fill rh_residual, flux_drift and extended_residual.
void fill_diagnostics(const GasModel& gas, const SingularOde& ode, Profile& profile);

}  // namespace vprof
