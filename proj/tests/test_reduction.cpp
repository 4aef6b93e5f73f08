#include <gtest/gtest.h>

#include "support.hpp"
#include "vprof/reduction.hpp"
#include "vprof/system.hpp"

namespace vprof {
namespace {

using test::default_gas;

Eigen::VectorXd U5(double a, double b, double c, double d, double e) {
  Eigen::VectorXd u(5);
  u << a, b, c, d, e;
  return u;
}

TEST(ReduceW, Examples) {
  EXPECT_DOUBLE_EQ(reduce_w(default_gas(), {1.0, 1.0, 1.0, {1.0, 0.0}}, 0.0), -1.0);
  EXPECT_EQ(reduce_w(default_gas(), {1.3, 0.4, 0.7, {0.0, 5.0}}, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(reduce_w(default_gas(), {2.0, -1.0, 1.0, {3.0, 0.0}}, 0.0), 6.0);
  EXPECT_DOUBLE_EQ(reduce_w(default_gas(), {2.0, 1.5, 1.0, {1.0, 0.0}}, 0.5), -2.0);
}

TEST(ReduceW, SingularityGuard) {
  test::expect_kind(ErrorKind::singularity,
                    [] { reduce_w(default_gas(), {1.0, 0.0, 1.0, {1.0, 0.0}}, 0.0); });
  test::expect_kind(ErrorKind::singularity,
                    [] { reduce_w(default_gas(), {1.0, 0.3, 1.0, {1.0, 0.0}}, 0.3 + 1e-9); });
}

TEST(SingularOde, DerivedExample) {
  // Block algebra by hand: A22 v - A21 A21^T / a11 with v_x = 1 gives
  // [[0, 1], [0, 2.5]], which annihilates (1, 0).
  const SingularOde ode = steady_singular_ode(default_gas());
  const Eigen::VectorXd F = ode.F(U5(1, 1, 1, 1, 0));
  EXPECT_EQ(ode.dim, 5);
  EXPECT_NEAR(F[0], -1.0, 1e-15);
  EXPECT_NEAR(F[1], 1.0, 1e-15);
  EXPECT_NEAR(F[2], 0.0, 1e-15);
  EXPECT_NEAR(F[3], 0.0, 1e-15);
  EXPECT_NEAR(F[4], 0.0, 1e-15);
  EXPECT_EQ(ode.zeta(U5(1, 0, 1, 3, -2)), 0.0);
}

TEST(SingularOde, TravellingAtCriticalSpeed) {
  const SingularOde ode = tw_singular_ode(default_gas(), 1.0);
  const Eigen::VectorXd U = U5(1, 1, 1, 1, 0);
  EXPECT_EQ(ode.zeta(U), 0.0);
  const Eigen::VectorXd F = ode.F(U);
  EXPECT_EQ(F[1], 0.0);
  EXPECT_EQ(F[2], 0.0);
  EXPECT_TRUE(F.allFinite());
}

TEST(SingularOde, SteadyIsTravellingAtZero) {
  test::Rng rng(41);
  for (const GasModel& g : {default_gas(), test::power_law_gas()}) {
    const SingularOde a = steady_singular_ode(g);
    const SingularOde b = tw_singular_ode(g, 0.0);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd U = rng.extended(0.0, 0.05).vec();
      EXPECT_LE((a.F(U) - b.F(U)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_EQ(a.zeta(U), b.zeta(U));
    }
  }
}

TEST(SingularOde, EquilibriaAtZeroGradient) {
  test::Rng rng(42);
  for (const GasModel& g : {default_gas(), test::power_law_gas()}) {
    for (int i = 0; i < 100; ++i) {
      const double sigma = rng.uniform(-2.0, 2.0);
      ExtendedState u = rng.extended(sigma, 0.1);
      u.z.setZero();
      const Eigen::VectorXd F = tw_singular_ode(g, sigma).F(u.vec());
      for (int k = 0; k < 5; ++k) EXPECT_EQ(F[k], 0.0);
    }
  }
}

TEST(SingularOde, NonzeroGradientIsNotAnEquilibrium) {
  test::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const double sigma = rng.uniform(-2.0, 2.0);
    ExtendedState u = rng.extended(sigma, 0.1);
    u.z = rng.unit2();
    EXPECT_GT(tw_singular_ode(default_gas(), sigma).F(u.vec()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

// F is a quadratic polynomial in z: F(c z) = c L + c^2 Q with L and Q fitted
// from c = +1 and c = -1.
TEST(SingularOde, QuadraticScalingInZ) {
  test::Rng rng(44);
  for (const GasModel& g : {default_gas(), test::power_law_gas()}) {
    for (int i = 0; i < 50; ++i) {
      const double sigma = rng.uniform(-1.0, 1.0);
      const ExtendedState u = rng.extended(sigma, 0.1);
      const SingularOde ode = tw_singular_ode(g, sigma);
      auto at = [&](double c) {
        ExtendedState w = u;
        w.z *= c;
        return ode.F(w.vec());
      };
      const Eigen::VectorXd L = 0.5 * (at(1.0) - at(-1.0));
      const Eigen::VectorXd Q = 0.5 * (at(1.0) + at(-1.0));
      for (double c : {2.0, 0.5, -3.0, 0.1}) {
        const Eigen::VectorXd pred = c * L + c * c * Q;
        const double scale = 1.0 + at(c).cwiseAbs().maxCoeff();
        EXPECT_LE((at(c) - pred).cwiseAbs().maxCoeff(), 1e-13 * scale);
      }
      // Only the z-rows carry quadratic terms.
      EXPECT_LE(Q.head(3).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(SingularOde, MassFluxIsConserved) {
  // d/dx [rho (v - sigma)] = (F_rho (v - sigma) + rho F_v) / zeta = 0.
  test::Rng rng(45);
  for (int i = 0; i < 100; ++i) {
    const double sigma = rng.uniform(-1.0, 1.0);
    const ExtendedState u = rng.extended(sigma, 0.1);
    const Eigen::VectorXd F = tw_singular_ode(test::power_law_gas(), sigma).F(u.vec());
    EXPECT_NEAR(F[0] * (u.v - sigma) + u.rho * F[1], 0.0, 1e-14);
  }
}

// Reconstructed (w, z_x) satisfy the travelling-wave block equations
//   a11 (v - sigma) w + A21^T z = 0
//   A21 w + (A22(u, u_x) - sigma E22) z = b z_x.
TEST(SingularOde, BlockEquationsHold) {
  test::Rng rng(46);
  for (const GasModel& g : {default_gas(), test::power_law_gas()}) {
    for (int i = 0; i < 100; ++i) {
      const double sigma = rng.uniform(-1.0, 1.0);
      const ExtendedState u = rng.extended(sigma, 0.1);
      const SingularOde ode = tw_singular_ode(g, sigma);
      const Eigen::VectorXd F = ode.F(u.vec());
      const double zeta = ode.zeta(u.vec());
      const double w = reduce_w(g, u, sigma);
      const Eigen::Vector2d zx = F.tail(2) / zeta;
      const SystemBlocks bl = blocks(g, u.state(), {w, u.z[0], u.z[1]});
      EXPECT_NEAR(bl.a11 * (u.v - sigma) * w + bl.A21.dot(u.z), 0.0, 1e-12);
      const Eigen::Vector2d r = bl.A21 * w + (bl.A22 - sigma * bl.E22) * u.z - bl.b * zx;
      EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_NEAR(F[0] / zeta, w, 1e-12 * (1.0 + std::abs(w)));
    }
  }
}

TEST(ExtendedResidual, Examples) {
  const SingularOde ode = steady_singular_ode(default_gas());
  const Eigen::VectorXd U = U5(1.2, 0.7, 0.9, 0.3, -0.4);
  EXPECT_LE(extended_residual(ode, U, ode.F(U) / ode.zeta(U)).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::VectorXd rest = U5(1.2, 0.7, 0.9, 0.0, 0.0);
  EXPECT_EQ(extended_residual(ode, rest, Eigen::VectorXd::Zero(5)), Eigen::VectorXd::Zero(5));
  EXPECT_EQ(extended_residual(ode, U, Eigen::VectorXd::Zero(5)), -ode.F(U));
}

TEST(ExtendedState, RoundTrip) {
  const ExtendedState u{1.5, -0.2, 0.8, {0.1, 0.2}};
  const ExtendedState v = ExtendedState::from(u.vec());
  EXPECT_EQ(v.vec(), u.vec());
  EXPECT_EQ(ExtendedState::at_rest({1.0, 2.0, 3.0}).vec(), U5(1, 2, 3, 0, 0));
}

}  // namespace
}  // namespace vprof
