#include "vprof/profiles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "vprof/error.hpp"

namespace vprof {

// ---------------------------------------------------------------------------
// Rankine-Hugoniot
// ---------------------------------------------------------------------------

Eigen::Vector3d rh_residual(const GasModel& gas, const State& minus, const State& plus,
                            double sigma) {
  return (euler_fluxes(gas, plus) - euler_fluxes(gas, minus)) -
         sigma * (conserved(gas, plus) - conserved(gas, minus));
}

bool lax_admissible(const GasModel& gas, const RHPair& pair) {
  return characteristic_speed(gas, pair.plus, pair.family) < pair.sigma &&
         pair.sigma < characteristic_speed(gas, pair.minus, pair.family);
}

namespace {

// Derivatives of the Euler fluxes f and conserved quantities g with respect
// to the primitive variables (rho, v, theta).
void flux_jacobians(const GasModel& gas, const Eigen::Vector3d& P, Eigen::Matrix3d& df,
                    Eigen::Matrix3d& dg) {
  const double rho = P[0], v = P[1], theta = P[2];
  const double R = gas.R, cv = gas.cv();
  const double h = (cv + R) * theta;
  dg << 1.0, 0.0, 0.0,
        v, rho, 0.0,
        cv * theta + 0.5 * v * v, rho * v, rho * cv;
  df << v, rho, 0.0,
        v * v + R * theta, 2.0 * rho * v, R * rho,
        v * (0.5 * v * v + h), rho * (1.5 * v * v + h), rho * v * (cv + R);
}

bool admissible_for(const GasModel& gas, const Eigen::Vector3d& P,
                    const std::optional<StateBox>& box) {
  if (!P.allFinite() || P[0] < gas.c_rho || !(P[2] > 0.0)) return false;
  return !box || box->contains(State::from(P));
}

// One deflated Newton solve at fixed sigma starting from `guess`.
Eigen::Vector3d newton_rh(const GasModel& gas, const State& minus, double sigma,
                          Eigen::Vector3d P, const RhOptions& opts) {
  const Eigen::Vector3d P0 = minus.vec();
  const Eigen::Vector3d f0 = euler_fluxes(gas, minus);
  const Eigen::Vector3d g0 = conserved(gas, minus);
  const double scale = std::max({1.0, f0.cwiseAbs().maxCoeff(), std::abs(sigma) * g0.cwiseAbs().maxCoeff()});

  auto residual = [&](const Eigen::Vector3d& Q) {
    const State s = State::from(Q);
    return Eigen::Vector3d((euler_fluxes(gas, s) - f0) - sigma * (conserved(gas, s) - g0));
  };

  for (int it = 0; it < opts.max_iter; ++it) {
    if (!admissible_for(gas, P, opts.box))
      throw Error(ErrorKind::admissibility, "solve_rh: Newton iterate left the admissible box");
    const Eigen::Vector3d R = residual(P);
    if (R.cwiseAbs().maxCoeff() <= 1e-14 * scale) break;

    Eigen::Matrix3d df, dg;
    flux_jacobians(gas, P, df, dg);
    const Eigen::Matrix3d JR = df - sigma * dg;
    // Deflation M(P) = 1 / |P - P0|^2 + 1 removes the trivial root P = P0.
    const Eigen::Vector3d d = P - P0;
    const double dn2 = d.squaredNorm();
    const double M = 1.0 / dn2 + 1.0;
    const Eigen::Vector3d gradM = -2.0 * d / (dn2 * dn2);
    const Eigen::Matrix3d JG = M * JR + R * gradM.transpose();
    const Eigen::Vector3d step = JG.fullPivLu().solve(-M * R);
    if (!step.allFinite())
      throw Error(ErrorKind::no_convergence, "solve_rh: singular Newton system");
    P += step;
    if (step.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + P.cwiseAbs().maxCoeff())) {
      if (!admissible_for(gas, P, opts.box))
        throw Error(ErrorKind::admissibility, "solve_rh: Newton iterate left the admissible box");
      break;
    }
  }
  if (!(residual(P).cwiseAbs().maxCoeff() <= opts.tol))
    throw Error(ErrorKind::no_convergence, "solve_rh: Newton did not converge");
  return P;
}

}  // namespace

RHPair solve_rh(const GasModel& gas, const State& minus, int family, double strength,
                const RhOptions& opts) {
  gas.validate();
  require_admissible(gas, minus);
  if (family == 2)
    throw Error(ErrorKind::config,
                "family 2 is the contact family: v - sigma vanishes at both endpoints");
  if (family != 1 && family != 3)
    throw Error(ErrorKind::config, "shock family must be 1 or 3");
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw Error(ErrorKind::config, "shock strength must be non-negative");

  const double lambda = characteristic_speed(gas, minus, family);
  RHPair pair{minus, minus, lambda - strength, family, strength};
  if (strength == 0.0) return pair;

  // Continuation in the strength. The first guess follows the Hugoniot
  // curve to second order: along r_k = (rho, -/+ c, (gamma - 1) theta) per
  // unit relative density change eps, sigma = lambda_k - s gives
  // eps = +/- 4 s / (c (gamma + 1)).
  const double c = sound_speed(gas, minus);
  const Eigen::Vector3d P0 = minus.vec();
  const Eigen::Vector3d r(minus.rho, family == 1 ? -c : c, (gas.gamma - 1.0) * minus.theta);
  const double sign = family == 1 ? 1.0 : -1.0;
  const int n_steps = std::max(1, static_cast<int>(std::ceil(strength / (0.05 * c))));

  Eigen::Vector3d prev = P0, cur = P0;
  double s_prev = 0.0;
  for (int i = 1; i <= n_steps; ++i) {
    const double s = strength * i / n_steps;
    Eigen::Vector3d guess;
    if (i == 1) {
      guess = P0 + sign * 4.0 * s / (c * (gas.gamma + 1.0)) * r;
    } else {
      const double ds = s - s_prev;
      const double ds_prev = s_prev - strength * (i - 2) / n_steps;
      guess = cur + (cur - prev) * (ds / ds_prev);
    }
    Eigen::Vector3d next = newton_rh(gas, minus, lambda - s, guess, opts);
    prev = cur;
    cur = next;
    s_prev = s;
  }

  pair.plus = State::from(cur);
  if ((cur - P0).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + P0.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::no_convergence, "solve_rh: converged to the trivial state");
  if (!lax_admissible(gas, pair))
    throw Error(ErrorKind::no_convergence, "solve_rh: converged to a non-Lax state");
  return pair;
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace {

double scaled_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return ((a - b).array().abs() / (1.0 + b.array().abs())).maxCoeff();
}

// Real eigen-directions of J / zeta that grow (want_unstable) or decay in x.
std::vector<std::pair<double, Eigen::VectorXd>> x_directions(const LinearizationReport& rep,
                                                             double zeta, bool want_unstable) {
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    const std::complex<double> lam = rep.eigenvalues[i];
    if (std::abs(lam.real()) < rep.threshold) continue;
    if (std::abs(lam.imag()) > 1e-9 * std::abs(lam)) continue;
    const double rate = lam.real() / zeta;
    if ((rate > 0.0) != want_unstable) continue;
    Eigen::VectorXd r = rep.eigenvectors.col(i).real();
    r.normalize();
    Eigen::Index imax = 0;
    r.cwiseAbs().maxCoeff(&imax);
    if (r[imax] < 0.0) r = -r;
    out.emplace_back(rate, r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::abs(a.first) < std::abs(b.first);
  });
  return out;
}

void reverse_trajectory(Trajectory& tr) {
  std::reverse(tr.x.begin(), tr.x.end());
  std::reverse(tr.tau.begin(), tr.tau.end());
  std::reverse(tr.states.begin(), tr.states.end());
}

// Translate x so that component `idx` passes the midpoint of its endpoint
// values at x = 0.
void center_on_midpoint(Trajectory& tr, int idx) {
  if (tr.size() < 2) return;
  const double a = tr.states.front()[idx];
  const double b = tr.states.back()[idx];
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double u0 = tr.states[i - 1][idx] - mid;
    const double u1 = tr.states[i][idx] - mid;
    if ((u0 <= 0.0 && u1 >= 0.0) || (u0 >= 0.0 && u1 <= 0.0)) {
      const double w = u0 == u1 ? 0.0 : u0 / (u0 - u1);
      const double x0 = tr.x[i - 1] + w * (tr.x[i] - tr.x[i - 1]);
      for (double& x : tr.x) x -= x0;
      return;
    }
  }
}

Trajectory constant_trajectory(const Eigen::VectorXd& V, double zeta) {
  Trajectory tr;
  tr.x = {0.0};
  tr.states = {V};
  tr.termination = Termination::converged_to_equilibrium;
  tr.termination_zeta = zeta;
  tr.stats.min_abs_zeta = std::abs(zeta);
  return tr;
}

struct ShootPlan {
  bool forward = true;  // from the minus side toward plus
  Eigen::VectorXd base;
  Eigen::VectorXd target;
  Eigen::VectorXd direction;
  std::string description;
};

}  // namespace

// ---------------------------------------------------------------------------
// Shock profiles
// ---------------------------------------------------------------------------

Profile shock_profile(const GasModel& gas, const RHPair& pair, const ShootOptions& opts) {
  Profile prof;
  prof.kind = ProfileKind::shock;
  prof.sigma = pair.sigma;
  prof.left = pair.minus;
  prof.right = pair.plus;

  const SingularOde ode = tw_singular_ode(gas, pair.sigma);
  const Eigen::VectorXd Em = ExtendedState::at_rest(pair.minus).vec();
  const Eigen::VectorXd Ep = ExtendedState::at_rest(pair.plus).vec();
  const double zm = ode.zeta(Em);
  const double zp = ode.zeta(Ep);
  const double jump = (Ep - Em).cwiseAbs().maxCoeff();

  if (jump == 0.0) {
    prof.trajectory = constant_trajectory(Em, zm);
    prof.diagnostics.shooting = "constant";
    fill_diagnostics(gas, ode, prof);
    return prof;
  }
  const double guard = opts.integrator.guard;
  if (!(std::abs(zm) > guard) || !(std::abs(zp) > guard) || (zm > 0.0) != (zp > 0.0))
    throw Error(ErrorKind::singularity,
                "shock_profile: v - sigma vanishes or changes sign between the endpoints");

  const auto out_m = x_directions(linearize(ode, Em, opts.fd_step), zm, true);
  const auto in_p = x_directions(linearize(ode, Ep, opts.fd_step), zp, false);

  ShootPlan plan;
  if (out_m.size() == 1) {
    plan = {true, Em, Ep, out_m.front().second, "forward from U-"};
  } else if (in_p.size() == 1) {
    plan = {false, Ep, Em, in_p.front().second, "backward from U+"};
  } else {
    throw Error(ErrorKind::no_connection,
                "shock_profile: neither endpoint has a one-dimensional invariant manifold");
  }

  IntegratorOptions io = opts.integrator;
  const double bound = 1e6 * (1.0 + Em.cwiseAbs().maxCoeff());
  io.admissible = [&gas, bound](const Eigen::VectorXd& U) {
    return U[0] >= gas.c_rho && U[2] > 0.0 && U.cwiseAbs().maxCoeff() < bound;
  };

  bool saw_singularity = false;
  std::string attempts;
  for (const double sign : {1.0, -1.0}) {
    const Eigen::VectorXd start = plan.base + sign * opts.eps * jump * plan.direction;
    Trajectory tr = integrate_direct(ode, start, 0.0, plan.forward ? opts.x_budget : -opts.x_budget, io);
    const double dist = scaled_distance(tr.back(), plan.target);
    attempts += std::string(sign > 0 ? " +" : " -") + ":" + std::string(to_string(tr.termination));
    if (tr.termination == Termination::singularity_approached) saw_singularity = true;
    const bool settled = tr.termination == Termination::converged_to_equilibrium ||
                         tr.termination == Termination::reached_end;
    if (settled && dist <= opts.end_tol) {
      if (!plan.forward) reverse_trajectory(tr);
      center_on_midpoint(tr, 1);
      prof.trajectory = std::move(tr);
      prof.diagnostics.shooting = plan.description + (sign > 0 ? ", sign +" : ", sign -");
      fill_diagnostics(gas, ode, prof);
      return prof;
    }
  }
  if (saw_singularity)
    throw Error(ErrorKind::singularity, "shock_profile: zeta reached the guard en route;" + attempts);
  throw Error(ErrorKind::no_connection, "shock_profile: no branch reached the far endpoint;" + attempts);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

namespace {

Eigen::Vector3d flux_triple(const GasModel& gas, double sigma, const Eigen::VectorXd& U) {
  const double rho = U[0], v = U[1], theta = U[2], z1 = U[3], z2 = U[4];
  const double m = rho * (v - sigma);
  const double p = gas.R * rho * theta;
  const double e = gas.cv() * theta;
  const double nu = gas.nu(rho).value;
  const double k = gas.k(rho).value;
  return {m, m * v + p - nu * z1, m * (e + 0.5 * v * v) + v * p - k * z2 - nu * v * z1};
}

Eigen::Vector3d flux_reference(const GasModel& gas, const Profile& profile) {
  const State& ref = profile.kind == ProfileKind::shock ? profile.left : profile.right;
  return flux_triple(gas, profile.sigma, ExtendedState::at_rest(ref).vec());
}

}  // namespace

std::vector<Eigen::Vector3d> flux_constants(const GasModel& gas, const Profile& profile) {
  const Eigen::Vector3d ref = flux_reference(gas, profile);
  std::vector<Eigen::Vector3d> out;
  out.reserve(profile.trajectory.size());
  for (const auto& U : profile.trajectory.states)
    out.push_back(flux_triple(gas, profile.sigma, U) - ref);
  return out;
}

double flux_drift(const GasModel& gas, const Profile& profile) {
  const Eigen::Vector3d ref = flux_reference(gas, profile);
  const Eigen::Array3d denom = ref.array().abs().max(1.0);
  double worst = 0.0;
  for (const auto& d : flux_constants(gas, profile))
    worst = std::max(worst, (d.array().abs() / denom).maxCoeff());
  return worst;
}

double max_extended_residual(const SingularOde& ode, const Profile& profile) {
  double worst = 0.0;
  for (const auto& U : profile.trajectory.states) {
    const double zeta = ode.zeta(U);
    if (zeta == 0.0) continue;
    const Eigen::VectorXd U_prime = ode.F(U) / zeta;
    worst = std::max(worst, extended_residual(ode, U, U_prime).cwiseAbs().maxCoeff());
  }
  return worst;
}

void fill_diagnostics(const GasModel& gas, const SingularOde& ode, Profile& profile) {
  auto& d = profile.diagnostics;
  d.rh_residual = profile.kind == ProfileKind::shock
                      ? rh_residual(gas, profile.left, profile.right, profile.sigma)
                            .cwiseAbs()
                            .maxCoeff()
                      : 0.0;
  d.flux_drift = flux_drift(gas, profile);
  d.extended_residual = max_extended_residual(ode, profile);
  d.termination = std::string(to_string(profile.trajectory.termination));
  d.zeta_sign_changes = profile.trajectory.stats.zeta_sign_changes;
  d.min_abs_zeta = profile.trajectory.stats.min_abs_zeta;
  d.rescaled = profile.trajectory.rescaled;
}

// ---------------------------------------------------------------------------
// Conservation-form oracle
// ---------------------------------------------------------------------------

Eigen::Vector2d gilbarg_rhs(const GasModel& gas, const GilbargOracle& o,
                            const Eigen::Vector2d& vt) {
  const double v = vt[0];
  const double theta = vt[1];
  const double rho = o.m / (v - o.sigma);
  const double p = gas.R * rho * theta;
  const double e = gas.cv() * theta;
  const double nu = gas.nu(rho).value;
  const double k = gas.k(rho).value;
  const double v_x = (o.m * v + p - o.Pi) / nu;
  const double theta_x = (o.m * (e + 0.5 * v * v) + v * p - nu * v * v_x - o.E) / k;
  return {v_x, theta_x};
}

namespace {

// Real eigenpairs of a 2x2 matrix from the characteristic polynomial.
std::vector<std::pair<double, Eigen::Vector2d>> eig2(const Eigen::Matrix2d& J) {
  const double tr = J.trace();
  const double det = J.determinant();
  const double disc = 0.25 * tr * tr - det;
  std::vector<std::pair<double, Eigen::Vector2d>> out;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  for (const double lam : {0.5 * tr - sq, 0.5 * tr + sq}) {
    const Eigen::Vector2d c1(J(0, 1), lam - J(0, 0));
    const Eigen::Vector2d c2(lam - J(1, 1), J(1, 0));
    Eigen::Vector2d r = c1.norm() >= c2.norm() ? c1 : c2;
    if (r.norm() == 0.0) r = Eigen::Vector2d(1.0, 0.0);
    r.normalize();
    if (std::abs(r[1]) > std::abs(r[0]) ? r[1] < 0.0 : r[0] < 0.0) r = -r;
    out.emplace_back(lam, r);
  }
  return out;
}

}  // namespace

GilbargOracle gilbarg_oracle(const GasModel& gas, const RHPair& pair, const ShootOptions& opts) {
  GilbargOracle o;
  o.sigma = pair.sigma;
  const State& a = pair.minus;
  const double pa = gas.R * a.rho * a.theta;
  const double ea = gas.cv() * a.theta;
  o.m = a.rho * (a.v - pair.sigma);
  o.Pi = o.m * a.v + pa;
  o.E = o.m * (ea + 0.5 * a.v * a.v) + a.v * pa;
  if (o.m == 0.0) throw Error(ErrorKind::singularity, "gilbarg_oracle: zero mass flux");

  SingularOde field;
  field.dim = 2;
  field.label = "gilbarg";
  field.F = [&gas, &o](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return gilbarg_rhs(gas, o, Eigen::Vector2d(y[0], y[1]));
  };
  field.zeta = [](const Eigen::VectorXd&) { return 1.0; };

  const Eigen::Vector2d Pm(pair.minus.v, pair.minus.theta);
  const Eigen::Vector2d Pp(pair.plus.v, pair.plus.theta);
  const double jump = (Pp - Pm).cwiseAbs().maxCoeff();
  if (jump == 0.0) {
    o.trajectory = constant_trajectory(Pm, 1.0);
    o.shooting = "constant";
    return o;
  }

  auto pick = [&](const Eigen::Vector2d& P, bool unstable) {
    std::vector<Eigen::Vector2d> dirs;
    for (const auto& [lam, r] : eig2(fd_jacobian(field.F, P, opts.fd_step)))
      if (std::abs(lam) >= kCenterThreshold && (lam > 0.0) == unstable) dirs.push_back(r);
    return dirs;
  };
  const auto out_m = pick(Pm, true);
  const auto in_p = pick(Pp, false);

  bool forward = true;
  Eigen::Vector2d base, target, dir;
  if (out_m.size() == 1) {
    base = Pm, target = Pp, dir = out_m.front();
    o.shooting = "forward from U-";
  } else if (in_p.size() == 1) {
    forward = false;
    base = Pp, target = Pm, dir = in_p.front();
    o.shooting = "backward from U+";
  } else {
    throw Error(ErrorKind::no_connection, "gilbarg_oracle: no one-dimensional manifold");
  }

  IntegratorOptions io = opts.integrator;
  const double sigma = pair.sigma;
  const double sgn = o.m > 0.0 ? 1.0 : -1.0;
  io.admissible = [&gas, &o, sigma, sgn](const Eigen::VectorXd& y) {
    const double w = y[0] - sigma;
    return sgn * w > 0.0 && o.m / w >= gas.c_rho && y[1] > 0.0;
  };

  for (const double sign : {1.0, -1.0}) {
    const Eigen::Vector2d start = base + sign * opts.eps * jump * dir;
    Trajectory tr = integrate_direct(field, start, 0.0, forward ? opts.x_budget : -opts.x_budget, io);
    const bool settled = tr.termination == Termination::converged_to_equilibrium ||
                         tr.termination == Termination::reached_end;
    if (settled && scaled_distance(tr.back(), target) <= opts.end_tol) {
      if (!forward) reverse_trajectory(tr);
      center_on_midpoint(tr, 0);
      o.trajectory = std::move(tr);
      o.shooting += sign > 0 ? ", sign +" : ", sign -";
      return o;
    }
  }
  throw Error(ErrorKind::no_connection, "gilbarg_oracle: no branch reached the far endpoint");
}

Profile oracle_profile(const GasModel& gas, const RHPair& pair, const GilbargOracle& oracle) {
  Profile prof;
  prof.kind = ProfileKind::shock;
  prof.sigma = oracle.sigma;
  prof.left = pair.minus;
  prof.right = pair.plus;
  prof.trajectory.x = oracle.trajectory.x;
  prof.trajectory.termination = oracle.trajectory.termination;
  prof.trajectory.stats = oracle.trajectory.stats;
  for (const auto& y : oracle.trajectory.states) {
    const Eigen::Vector2d vt(y[0], y[1]);
    const Eigen::Vector2d d = gilbarg_rhs(gas, oracle, vt);
    Eigen::VectorXd U(5);
    U << oracle.m / (vt[0] - oracle.sigma), vt[0], vt[1], d[0], d[1];
    prof.trajectory.states.push_back(U);
  }
  prof.diagnostics.shooting = oracle.shooting;
  return prof;
}

double oracle_reduction_residual(const GasModel& gas, const GilbargOracle& oracle,
                                 const SingularOde& ode) {
  auto rhs = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return gilbarg_rhs(gas, oracle, Eigen::Vector2d(y[0], y[1]));
  };
  double worst = 0.0;
  for (const auto& y : oracle.trajectory.states) {
    const Eigen::VectorXd d = rhs(y);
    // d/dx of (v_x, theta_x) along the solution by the chain rule.
    const Eigen::VectorXd dd = fd_jacobian(rhs, y, 1e-6) * d;
    const double w = y[0] - oracle.sigma;
    Eigen::VectorXd U(5), Up(5);
    U << oracle.m / w, y[0], y[1], d[0], d[1];
    Up << -oracle.m * d[0] / (w * w), d[0], d[1], dd[0], dd[1];
    worst = std::max(worst, extended_residual(ode, U, Up).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Profile comparison
// ---------------------------------------------------------------------------

namespace {

struct Parametrized {
  std::vector<double> key;                // ascending
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::VectorXd> slopes;    // d values / d key
};

Parametrized parametrize(const Profile& p, int idx) {
  const auto& S = p.trajectory.states;
  const std::size_t n = S.size();
  const double k0 = S.front()[idx];
  const double k1 = S.back()[idx];
  const double span = std::abs(k1 - k0);
  // Exponential tails sit within rounding of the endpoints; drop them.
  const double trim = 1e-9 * span;
  std::size_t i0 = 0, i1 = n - 1;
  while (i0 + 1 < n && std::abs(S[i0 + 1][idx] - k0) <= trim) ++i0;
  while (i1 > i0 && std::abs(S[i1 - 1][idx] - k1) <= trim) --i1;

  const double dir = k1 > k0 ? 1.0 : -1.0;
  for (std::size_t i = i0 + 1; i <= i1; ++i)
    if (!(dir * (S[i][idx] - S[i - 1][idx]) > 0.0))
      throw Error(ErrorKind::non_monotone, "compare_profiles: matching variable is not strictly monotone");

  Parametrized out;
  for (std::size_t i = i0; i <= i1; ++i) {
    out.key.push_back(S[i][idx]);
    out.values.push_back(S[i]);
  }
  if (dir < 0.0) {
    std::reverse(out.key.begin(), out.key.end());
    std::reverse(out.values.begin(), out.values.end());
  }

  // Slopes of the local quadratic interpolant.
  const std::size_t m = out.key.size();
  out.slopes.assign(m, Eigen::VectorXd::Zero(S.front().size()));
  if (m < 2) return out;
  auto delta = [&](std::size_t j) {
    return Eigen::VectorXd((out.values[j + 1] - out.values[j]) / (out.key[j + 1] - out.key[j]));
  };
  if (m == 2) {
    out.slopes[0] = out.slopes[1] = delta(0);
    return out;
  }
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double h0 = out.key[j] - out.key[j - 1];
    const double h1 = out.key[j + 1] - out.key[j];
    out.slopes[j] = (delta(j - 1) * h1 + delta(j) * h0) / (h0 + h1);
  }
  {
    const double h0 = out.key[1] - out.key[0], h1 = out.key[2] - out.key[1];
    out.slopes[0] = ((2.0 * h0 + h1) * delta(0) - h0 * delta(1)) / (h0 + h1);
  }
  {
    const std::size_t j = m - 1;
    const double h0 = out.key[j] - out.key[j - 1], h1 = out.key[j - 1] - out.key[j - 2];
    out.slopes[j] = ((2.0 * h0 + h1) * delta(j - 1) - h0 * delta(j - 2)) / (h0 + h1);
  }
  return out;
}

// Cubic Hermite interpolation at key k (inside the range).
Eigen::VectorXd interpolate(const Parametrized& p, double k) {
  const auto it = std::upper_bound(p.key.begin(), p.key.end(), k);
  std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - p.key.begin(), 1)) - 1;
  j = std::min(j, p.key.size() - 2);
  const double h = p.key[j + 1] - p.key[j];
  const double t = (k - p.key[j]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * p.values[j] + h10 * h * p.slopes[j] + h01 * p.values[j + 1] +
         h11 * h * p.slopes[j + 1];
}

double one_sided(const Parametrized& a, const Parametrized& b, int idx) {
  const double lo = std::max(a.key.front(), b.key.front());
  const double hi = std::min(a.key.back(), b.key.back());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.key.size(); ++i) {
    if (a.key[i] < lo || a.key[i] > hi) continue;
    Eigen::VectorXd d = (a.values[i] - interpolate(b, a.key[i])).cwiseAbs();
    d[idx] = 0.0;
    worst = std::max(worst, d.maxCoeff());
  }
  return worst;
}

}  // namespace

double compare_profiles(const Profile& a, const Profile& b, int matching) {
  if (a.trajectory.empty() || b.trajectory.empty())
    throw Error(ErrorKind::config, "compare_profiles: empty profile");
  const auto& Sa = a.trajectory.states;
  const auto& Sb = b.trajectory.states;
  if (matching < 0 || matching >= Sa.front().size() || Sa.front().size() != Sb.front().size())
    throw Error(ErrorKind::config, "compare_profiles: bad matching component");
  const bool const_a = Sa.front()[matching] == Sa.back()[matching];
  const bool const_b = Sb.front()[matching] == Sb.back()[matching];
  if (const_a && const_b) {
    if (Sa.size() == 1 && Sb.size() == 1) return (Sa.front() - Sb.front()).cwiseAbs().maxCoeff();
    throw Error(ErrorKind::non_monotone, "compare_profiles: matching variable is constant");
  }
  if (const_a || const_b)
    throw Error(ErrorKind::non_monotone, "compare_profiles: matching variable is constant");
  const Parametrized pa = parametrize(a, matching);
  const Parametrized pb = parametrize(b, matching);
  if (pa.key.size() < 2 || pb.key.size() < 2)
    throw Error(ErrorKind::non_monotone, "compare_profiles: too few monotone samples");
  return std::max(one_sided(pa, pb, matching), one_sided(pb, pa, matching));
}

// ---------------------------------------------------------------------------
// Boundary layers
// ---------------------------------------------------------------------------

std::vector<Eigen::VectorXd> decaying_directions(const GasModel& gas, const State& limit,
                                                 double fd_step) {
  require_admissible(gas, limit);
  if (!(std::abs(limit.v) > kDefaultSingularGuard))
    throw Error(ErrorKind::singularity, "boundary layer limit state has v = 0");
  const SingularOde ode = steady_singular_ode(gas);
  const auto dirs = x_directions(linearize(ode, ExtendedState::at_rest(limit).vec(), fd_step),
                                 limit.v, false);
  std::vector<Eigen::VectorXd> out;
  for (const auto& d : dirs) out.push_back(d.second);
  return out;
}

Profile boundary_layer(const GasModel& gas, const State& limit, int direction_index,
                       const LayerOptions& opts) {
  gas.validate();
  const auto dirs = decaying_directions(gas, limit, opts.fd_step);
  if (dirs.empty())
    throw Error(ErrorKind::no_decaying_direction,
                "boundary_layer: linearization has no stable non-center direction");
  if (direction_index < 0 || direction_index >= static_cast<int>(dirs.size()))
    throw Error(ErrorKind::config, "boundary_layer: direction index out of range");

  const SingularOde ode = steady_singular_ode(gas);
  const Eigen::VectorXd E = ExtendedState::at_rest(limit).vec();

  Profile prof;
  prof.kind = ProfileKind::boundary_layer;
  prof.sigma = 0.0;
  prof.right = limit;

  if (opts.amplitude == 0.0) {
    prof.left = limit;
    prof.trajectory = constant_trajectory(E, limit.v);
    prof.diagnostics.shooting = "constant";
    fill_diagnostics(gas, ode, prof);
    return prof;
  }

  IntegratorOptions io = opts.integrator;
  io.detect_equilibrium = false;
  io.admissible = [&gas](const Eigen::VectorXd& U) { return U[0] >= gas.c_rho && U[2] > 0.0; };
  const double departure = opts.max_departure;
  io.stop = [E, departure](const Eigen::VectorXd& U) {
    return (U - E).cwiseAbs().maxCoeff() >= departure;
  };

  const Eigen::VectorXd start = E + opts.amplitude * dirs[static_cast<std::size_t>(direction_index)];
  Trajectory tr = integrate_direct(ode, start, 0.0, -opts.length, io);
  prof.diagnostics.shooting = "backward from limit";
  if (tr.termination == Termination::singularity_approached) {
    // Continue through the characteristic point in the rescaled variable,
    // oriented so that x keeps decreasing while zeta keeps its sign.
    const double tau1 = limit.v > 0.0 ? -opts.rescaled_tau : opts.rescaled_tau;
    tr = integrate_rescaled(ode, start, 0.0, tau1, 0.0, io);
    prof.diagnostics.shooting = "backward from limit, rescaled";
  }
  if (tr.termination == Termination::step_failure)
    throw Error(ErrorKind::step_failure, "boundary_layer: integrator step failure");

  reverse_trajectory(tr);
  const double x0 = tr.x.front();
  for (double& x : tr.x) x -= x0;
  prof.left = ExtendedState::from(tr.states.front()).state();
  prof.trajectory = std::move(tr);
  fill_diagnostics(gas, ode, prof);
  return prof;
}

}  // namespace vprof
