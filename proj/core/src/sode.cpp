#include "vprof/sode.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "vprof/error.hpp"

namespace vprof {

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::singularity_approached: return "singularity_approached";
    case Termination::converged_to_equilibrium: return "converged_to_equilibrium";
    case Termination::step_failure: return "step_failure";
  }
  return "unknown";
}

namespace {

// Dormand-Prince 5(4), FSAL. The field is autonomous so the nodes c_i are not needed.
namespace dp {
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Problem {
  bool rescaled;
  const SingularOde* ode;
  int n;  // length of the integrated vector

  Eigen::VectorXd field(const Eigen::VectorXd& y) const {
    if (!rescaled) return ode->F(y) / ode->zeta(y);
    Eigen::VectorXd out(n);
    const Eigen::VectorXd V = y.head(ode->dim);
    out.head(ode->dim) = ode->F(V);
    out[ode->dim] = ode->zeta(V);
    return out;
  }

  double zeta(const Eigen::VectorXd& y) const {
    return rescaled ? ode->zeta(y.head(ode->dim)) : ode->zeta(y);
  }

  // Sup norm of the part of the field that moves V.
  double motion(const Eigen::VectorXd& f) const {
    return f.head(ode->dim).cwiseAbs().maxCoeff();
  }
};

Trajectory run(const Problem& pb, Eigen::VectorXd y, double t0, double t1,
               const IntegratorOptions& opts) {
  if (!(opts.tol > 0.0) || !(opts.rel_tol >= 0.0) || !(opts.guard > 0.0))
    throw Error(ErrorKind::config, "integrator tolerances and guard must be positive");
  if (!all_finite(y) || !std::isfinite(t0) || !std::isfinite(t1))
    throw Error(ErrorKind::config, "integrator start data must be finite");

  Trajectory tr;
  tr.rescaled = pb.rescaled;
  const int dim = pb.ode->dim;

  auto record = [&](double t, const Eigen::VectorXd& yy) {
    if (pb.rescaled) {
      tr.tau.push_back(t);
      tr.x.push_back(yy[dim]);
      tr.states.push_back(yy.head(dim));
    } else {
      tr.x.push_back(t);
      tr.states.push_back(yy);
    }
    const double z = pb.zeta(yy);
    tr.stats.min_abs_zeta = std::min(tr.stats.min_abs_zeta, std::abs(z));
  };

  const double z0 = pb.zeta(y);
  if (!pb.rescaled && !(std::abs(z0) > opts.guard))
    throw Error(ErrorKind::singularity, "integrate_direct: |zeta(V0)| within the guard");

  record(t0, y);
  tr.termination_zeta = z0;
  if (t1 == t0) {
    tr.termination = Termination::reached_end;
    return tr;
  }
  const double dir = t1 > t0 ? 1.0 : -1.0;

  Eigen::VectorXd k1 = pb.field(y);
  ++tr.stats.rhs_evals;
  if (!all_finite(k1)) {
    tr.termination = Termination::step_failure;
    return tr;
  }
  if (opts.detect_equilibrium && pb.motion(k1) == 0.0) {
    tr.termination = Termination::converged_to_equilibrium;
    return tr;
  }

  auto scale = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (opts.tol + opts.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  // Starting step (Hairer, Norsett & Wanner, II.4).
  double h = opts.h_init;
  if (!(h > 0.0)) {
    const Eigen::VectorXd sc = scale(y, y);
    const double d0 = (y.array() / sc.array()).abs().maxCoeff();
    const double d1 = (k1.array() / sc.array()).abs().maxCoeff();
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t1 - t0));
    const Eigen::VectorXd y1 = y + dir * h0 * k1;
    const Eigen::VectorXd f1 = pb.field(y1);
    ++tr.stats.rhs_evals;
    double d2 = all_finite(f1) ? ((f1 - k1).array() / sc.array()).abs().maxCoeff() / h0 : 0.0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opts.h_max, std::abs(t1 - t0)});

  double t = t0;
  int dwell = 0;
  int zeta_sign = sign_of(z0);
  double z_prev = z0;

  while (true) {
    if (tr.stats.accepted + tr.stats.rejected >= opts.max_steps) {
      tr.termination = Termination::step_failure;
      return tr;
    }
    const double h_floor = opts.h_min_rel * std::max(1.0, std::abs(t));
    if (h < h_floor) {
      tr.termination = Termination::step_failure;
      return tr;
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;

    using namespace dp;
    const Eigen::VectorXd k2 = pb.field(y + hs * (a21 * k1));
    const Eigen::VectorXd k3 = pb.field(y + hs * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = pb.field(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = pb.field(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        pb.field(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = pb.field(y_new);
    tr.stats.rhs_evals += 6;

    const bool finite = all_finite(k2) && all_finite(k3) && all_finite(k4) && all_finite(k5) &&
                        all_finite(k6) && all_finite(y_new) && all_finite(k7) &&
                        (!opts.admissible || opts.admissible(y_new.head(dim)));
    double err = std::numeric_limits<double>::infinity();
    if (finite) {
      const Eigen::VectorXd e =
          hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err = (e.array() / scale(y, y_new).array()).abs().maxCoeff();
    }

    const double z_new = finite ? pb.zeta(y_new) : 0.0;
    // Direct mode never steps across zeta = 0.
    const bool crossed = !pb.rescaled && finite && sign_of(z_new) != zeta_sign;

    if (!finite || crossed || !(err <= 1.0)) {
      ++tr.stats.rejected;
      const double fac = (finite && std::isfinite(err) && !crossed)
                             ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                             : 0.25;
      h *= fac;
      continue;
    }

    ++tr.stats.accepted;
    t = last ? t1 : t + hs;
    y = y_new;
    k1 = k7;
    record(t, y);
    tr.termination_zeta = z_new;

    if (sign_of(z_new) != zeta_sign) {
      // Only reachable in rescaled mode. The crossing is located by linear
      // interpolation of zeta in tau; x follows from cubic Hermite
      // interpolation with dx/dtau = zeta at both samples.
      ++tr.stats.zeta_sign_changes;
      const std::size_t n = tr.x.size();
      const double x_a = tr.x[n - 2];
      const double x_b = tr.x[n - 1];
      const double dt = tr.tau[n - 1] - tr.tau[n - 2];
      const double w = z_prev == z_new ? 0.5 : z_prev / (z_prev - z_new);
      const double h00 = (1 + 2 * w) * (1 - w) * (1 - w);
      const double h10 = w * (1 - w) * (1 - w);
      const double h01 = w * w * (3 - 2 * w);
      const double h11 = w * w * (w - 1);
      tr.stats.sign_change_x.push_back(h00 * x_a + h10 * dt * z_prev + h01 * x_b +
                                       h11 * dt * z_new);
      zeta_sign = sign_of(z_new);
    }
    z_prev = z_new;

    if (!pb.rescaled && std::abs(z_new) <= opts.guard) {
      tr.termination = Termination::singularity_approached;
      return tr;
    }
    if (opts.detect_equilibrium) {
      dwell = pb.motion(k1) < opts.eq_tol ? dwell + 1 : 0;
      if (dwell >= opts.eq_dwell) {
        tr.termination = Termination::converged_to_equilibrium;
        return tr;
      }
    }
    if (last || (opts.stop && opts.stop(y.head(dim)))) {
      tr.termination = Termination::reached_end;
      return tr;
    }
    const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h = std::min(h * fac, opts.h_max);
  }
}

}  // namespace

Trajectory integrate_direct(const SingularOde& ode, const Eigen::VectorXd& V0, double x0,
                            double x1, const IntegratorOptions& opts) {
  if (V0.size() != ode.dim) throw Error(ErrorKind::config, "initial state has wrong dimension");
  return run(Problem{false, &ode, ode.dim}, V0, x0, x1, opts);
}

Trajectory integrate_rescaled(const SingularOde& ode, const Eigen::VectorXd& V0, double tau0,
                              double tau1, double x0, const IntegratorOptions& opts) {
  if (V0.size() != ode.dim) throw Error(ErrorKind::config, "initial state has wrong dimension");
  Eigen::VectorXd y(ode.dim + 1);
  y.head(ode.dim) = V0;
  y[ode.dim] = x0;
  return run(Problem{true, &ode, ode.dim + 1}, y, tau0, tau1, opts);
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& V, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::config, "finite-difference step must be positive");
  const Eigen::Index n = V.size();
  Eigen::MatrixXd J(f(V).size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd vp = V, vm = V;
    vp[j] += h;
    vm[j] -= h;
    J.col(j) = (f(vp) - f(vm)) / (2.0 * h);
  }
  return J;
}

LinearizationReport linearize(const SingularOde& ode, const Eigen::VectorXd& V, double h,
                              double threshold) {
  LinearizationReport rep;
  rep.J = fd_jacobian(ode.F, V, h);
  rep.threshold = threshold;
  Eigen::EigenSolver<Eigen::MatrixXd> es(rep.J, true);
  rep.eigenvalues = es.eigenvalues();
  rep.eigenvectors = es.eigenvectors();
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    rep.eigenvectors.col(i).normalize();
    const double re = rep.eigenvalues[i].real();
    const int idx = static_cast<int>(i);
    if (std::abs(re) < threshold)
      rep.center.push_back(idx);
    else if (re < 0.0)
      rep.stable.push_back(idx);
    else
      rep.unstable.push_back(idx);
  }
  return rep;
}

}  // namespace vprof
