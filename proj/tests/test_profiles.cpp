#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "vprof/profiles.hpp"

namespace vprof {
namespace {

using test::default_gas;

const State kMinus{1.0, 0.0, 1.0};

// Normal-shock relations in the shock frame, written independently of the
// Newton solver. Given the upstream state and the shock speed, returns the
// downstream state.
State normal_shock(const GasModel& g, const State& up, double sigma) {
  const double c = std::sqrt(g.gamma * g.R * up.theta);
  const double M2 = std::pow((up.v - sigma) / c, 2);
  const double rho_ratio = (g.gamma + 1.0) * M2 / ((g.gamma - 1.0) * M2 + 2.0);
  const double p_ratio = 1.0 + 2.0 * g.gamma * (M2 - 1.0) / (g.gamma + 1.0);
  State down;
  down.rho = up.rho * rho_ratio;
  down.theta = up.theta * p_ratio / rho_ratio;
  down.v = sigma + (up.v - sigma) / rho_ratio;
  return down;
}

double state_distance(const State& a, const State& b) {
  return (a.vec() - b.vec()).cwiseAbs().maxCoeff();
}

TEST(RhResidual, Examples) {
  EXPECT_EQ(rh_residual(default_gas(), kMinus, kMinus, 0.7), Eigen::Vector3d::Zero());
  EXPECT_EQ(rh_residual(default_gas(), kMinus, {2.0, 0.0, 1.0}, 0.0), Eigen::Vector3d(0, 1, 0));
}

TEST(SolveRh, ZeroStrength) {
  const RHPair p = solve_rh(default_gas(), kMinus, 1, 0.0);
  EXPECT_EQ(p.plus.vec(), kMinus.vec());
  EXPECT_NEAR(p.sigma, -1.18322, 1e-5);
  EXPECT_EQ(p.sigma, -std::sqrt(1.4));
}

TEST(SolveRh, Family1MatchesNormalShockRelations) {
  for (double s : {0.05, 0.3, 0.6, 1.5}) {
    const RHPair p = solve_rh(default_gas(), kMinus, 1, s);
    // U- is upstream: the flow enters the 1-shock from the left.
    EXPECT_LE(state_distance(p.plus, normal_shock(default_gas(), kMinus, p.sigma)), 1e-10) << s;
    EXPECT_LE(rh_residual(default_gas(), p.minus, p.plus, p.sigma).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(lax_admissible(default_gas(), p));
    EXPECT_GT(p.plus.rho, kMinus.rho);
  }
}

TEST(SolveRh, Family3MatchesNormalShockRelations) {
  for (double s : {0.05, 0.3, 0.6}) {
    const RHPair p = solve_rh(default_gas(), kMinus, 3, s);
    // U+ is upstream for a 3-shock.
    EXPECT_LE(state_distance(p.minus, normal_shock(default_gas(), p.plus, p.sigma)), 1e-10) << s;
    EXPECT_TRUE(lax_admissible(default_gas(), p));
    EXPECT_LT(p.plus.rho, kMinus.rho);
  }
}

TEST(SolveRh, FrozenModerateShock) {
  // Family 1, strength 0.3 from (1, 0, 1); values from the normal-shock
  // relations above.
  const RHPair p = solve_rh(default_gas(), kMinus, 1, 0.3);
  EXPECT_NEAR(p.sigma, -1.4832159566199232, 1e-15);
  EXPECT_NEAR(p.plus.rho, 1.434748, 1e-6);
  EXPECT_NEAR(p.plus.v, -0.449434, 1e-6);
  EXPECT_NEAR(p.plus.theta, 1.161604, 1e-6);
}

TEST(SolveRh, JumpScalesWithStrength) {
  double prev_ratio = 0.0;
  for (double s : {0.04, 0.02, 0.01}) {
    const RHPair p = solve_rh(default_gas(), kMinus, 1, s);
    const double ratio = state_distance(p.plus, p.minus) / s;
    EXPECT_GT(ratio, 0.5);
    EXPECT_LT(ratio, 2.0);
    if (prev_ratio > 0.0) EXPECT_NEAR(ratio, prev_ratio, 0.05);
    prev_ratio = ratio;
  }
}

TEST(SolveRh, Errors) {
  test::expect_kind(ErrorKind::config, [] { solve_rh(default_gas(), kMinus, 2, 0.3); });
  test::expect_kind(ErrorKind::config, [] { solve_rh(default_gas(), kMinus, 1, -0.1); });
  test::expect_kind(ErrorKind::domain, [] { solve_rh(default_gas(), {0.01, 0.0, 1.0}, 1, 0.1); });
  GasModel g;
  g.c_rho = 0.9;
  // The 3-shock expands to rho+ ~ 0.6, below the vacuum bound.
  test::expect_kind(ErrorKind::admissibility, [&] { solve_rh(g, kMinus, 3, 0.3); });
}

void expect_good_profile(const GasModel& g, const RHPair& pair, const Profile& p) {
  const auto& d = p.diagnostics;
  EXPECT_LE(d.rh_residual, 1e-8);
  EXPECT_LE(d.flux_drift, 1e-6);
  EXPECT_LE(d.extended_residual, 1e-7);
  EXPECT_EQ(d.zeta_sign_changes, 0);
  const auto& S = p.trajectory.states;
  ShootOptions so;
  const Eigen::VectorXd Em = ExtendedState::at_rest(pair.minus).vec();
  const Eigen::VectorXd Ep = ExtendedState::at_rest(pair.plus).vec();
  EXPECT_LE(((S.front() - Em).array().abs() / (1.0 + Em.array().abs())).maxCoeff(), so.end_tol);
  EXPECT_LE(((S.back() - Ep).array().abs() / (1.0 + Ep.array().abs())).maxCoeff(), so.end_tol);
  EXPECT_LE(S.front().tail(2).cwiseAbs().maxCoeff(), so.end_tol);
  EXPECT_LE(S.back().tail(2).cwiseAbs().maxCoeff(), so.end_tol);
  // v monotone along x.
  const double dir = pair.plus.v > pair.minus.v ? 1.0 : -1.0;
  for (std::size_t i = 1; i < S.size(); ++i) EXPECT_GE(dir * (S[i][1] - S[i - 1][1]), 0.0);
  for (std::size_t i = 1; i < S.size(); ++i) EXPECT_GT(p.trajectory.x[i], p.trajectory.x[i - 1]);
  EXPECT_TRUE(test::all_finite(S));

  const GilbargOracle o = gilbarg_oracle(g, pair);
  EXPECT_LE(compare_profiles(p, oracle_profile(g, pair, o)), 1e-5);
  EXPECT_LE(oracle_reduction_residual(g, o, tw_singular_ode(g, pair.sigma)), 1e-6);
}

class ShockProfiles : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(ShockProfiles, ConnectsAndMatchesOracle) {
  const auto [family, s] = GetParam();
  const RHPair pair = solve_rh(default_gas(), kMinus, family, s);
  const Profile p = shock_profile(default_gas(), pair);
  EXPECT_EQ(p.kind, ProfileKind::shock);
  EXPECT_EQ(p.sigma, pair.sigma);
  expect_good_profile(default_gas(), pair, p);
}

INSTANTIATE_TEST_SUITE_P(FamiliesAndStrengths, ShockProfiles,
                         ::testing::Combine(::testing::Values(1, 3),
                                            ::testing::Values(0.1, 0.3, 0.6)));

TEST(ShockProfile, PowerLawTransport) {
  const GasModel g = test::power_law_gas();
  const RHPair pair = solve_rh(g, {1.2, 0.3, 0.9}, 1, 0.4);
  expect_good_profile(g, pair, shock_profile(g, pair));
}

TEST(ShockProfile, ZeroStrengthIsConstant) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 1, 0.0);
  const Profile p = shock_profile(default_gas(), pair);
  ASSERT_EQ(p.trajectory.size(), 1u);
  EXPECT_EQ(p.diagnostics.rh_residual, 0.0);
  EXPECT_EQ(p.diagnostics.flux_drift, 0.0);
  EXPECT_EQ(p.diagnostics.extended_residual, 0.0);
  for (const auto& d : flux_constants(default_gas(), p)) EXPECT_EQ(d, Eigen::Vector3d::Zero());
}

TEST(ShockProfile, TranslationInvariance) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 1, 0.3);
  const Profile p = shock_profile(default_gas(), pair);
  Profile q = p;
  for (double& x : q.trajectory.x) x += 3.25;
  fill_diagnostics(default_gas(), tw_singular_ode(default_gas(), pair.sigma), q);
  EXPECT_EQ(q.diagnostics.flux_drift, p.diagnostics.flux_drift);
  EXPECT_EQ(q.diagnostics.extended_residual, p.diagnostics.extended_residual);
  EXPECT_EQ(q.diagnostics.rh_residual, p.diagnostics.rh_residual);
  EXPECT_EQ(compare_profiles(p, q), 0.0);
}

TEST(FluxConstants, DetectsPerturbedSample) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 1, 0.3);
  Profile p = shock_profile(default_gas(), pair);
  const std::size_t mid = p.trajectory.size() / 2;
  p.trajectory.states[mid][1] += 1e-3;
  const auto drift = flux_constants(default_gas(), p);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < drift.size(); ++i) {
    if (drift[i].cwiseAbs().maxCoeff() > drift[worst].cwiseAbs().maxCoeff()) worst = i;
  }
  EXPECT_EQ(worst, mid);
  EXPECT_GT(flux_drift(default_gas(), p), 1e-4);
}

TEST(GilbargOracle, EndpointsAndReconstruction) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 1, 0.3);
  const GilbargOracle o = gilbarg_oracle(default_gas(), pair);
  EXPECT_EQ(gilbarg_rhs(default_gas(), o, {kMinus.v, kMinus.theta}), Eigen::Vector2d::Zero());
  EXPECT_LE(gilbarg_rhs(default_gas(), o, {pair.plus.v, pair.plus.theta}).cwiseAbs().maxCoeff(),
            1e-12);
  const Profile op = oracle_profile(default_gas(), pair, o);
  EXPECT_NEAR(op.trajectory.states.front()[0], pair.minus.rho, 1e-6);
  EXPECT_NEAR(op.trajectory.states.back()[0], pair.plus.rho, 1e-6);
  EXPECT_NEAR(o.trajectory.back()[0], pair.plus.v, 1e-6);
  EXPECT_NEAR(o.trajectory.back()[1], pair.plus.theta, 1e-6);
}

TEST(GilbargOracle, ConstantForZeroJump) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 3, 0.0);
  const GilbargOracle o = gilbarg_oracle(default_gas(), pair);
  EXPECT_EQ(o.trajectory.size(), 1u);
}

TEST(CompareProfiles, NonMonotoneIsAnError) {
  const RHPair pair = solve_rh(default_gas(), kMinus, 1, 0.3);
  Profile p = shock_profile(default_gas(), pair);
  const std::size_t mid = p.trajectory.size() / 2;
  std::swap(p.trajectory.states[mid], p.trajectory.states[mid + 1]);
  test::expect_kind(ErrorKind::non_monotone, [&] { compare_profiles(p, p); });
}

// Decaying directions counted independently from the steady flux-form
// system (sigma = 0) at the limit state: eigenvalues of its 2x2 Jacobian with
// negative real part.
int flux_form_decaying(const GasModel& g, const State& s) {
  GilbargOracle o;
  o.sigma = 0.0;
  o.m = s.rho * s.v;
  const double p = g.R * s.rho * s.theta;
  o.Pi = o.m * s.v + p;
  o.E = o.m * (g.cv() * s.theta + 0.5 * s.v * s.v) + s.v * p;
  auto f = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return gilbarg_rhs(g, o, Eigen::Vector2d(y[0], y[1]));
  };
  const Eigen::MatrixXd J = fd_jacobian(f, Eigen::Vector2d(s.v, s.theta), 1e-6);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(J).eigenvalues();
  int n = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) n += ev[i].real() < -1e-7;
  return n;
}

TEST(BoundaryLayer, DecayingDirectionCounts) {
  for (double v : {-2.0, -0.5, 0.5, 2.0, -1.1, 1.1}) {
    const State s{1.0, v, 1.0};
    EXPECT_EQ(static_cast<int>(decaying_directions(default_gas(), s).size()),
              flux_form_decaying(default_gas(), s))
        << v;
  }
  EXPECT_EQ(decaying_directions(default_gas(), {1.0, -0.5, 1.0}).size(), 1u);
  EXPECT_EQ(decaying_directions(default_gas(), {1.0, -2.0, 1.0}).size(), 2u);
  EXPECT_EQ(decaying_directions(default_gas(), {1.0, 2.0, 1.0}).size(), 0u);
  test::expect_kind(ErrorKind::singularity,
                    [] { decaying_directions(default_gas(), {1.0, 0.0, 1.0}); });
}

TEST(BoundaryLayer, OutflowLayer) {
  const State limit{1.0, -0.5, 1.0};
  for (double amp : {1e-3, -1e-3}) {
    const Profile p = boundary_layer(default_gas(), limit, 0, LayerOptions{amp});
    EXPECT_EQ(p.kind, ProfileKind::boundary_layer);
    EXPECT_GT(p.trajectory.size(), 10u);
    EXPECT_EQ(p.trajectory.x.front(), 0.0);
    EXPECT_EQ(p.right.vec(), limit.vec());
    EXPECT_LE(p.diagnostics.extended_residual, 1e-8);
    EXPECT_LE(p.diagnostics.flux_drift, 1e-5);
    // Converges toward the limit as x grows.
    const double d0 = (p.trajectory.states.front().head(3) - limit.vec()).cwiseAbs().maxCoeff();
    const double d1 = (p.trajectory.states.back().head(3) - limit.vec()).cwiseAbs().maxCoeff();
    EXPECT_GT(d0, 10.0 * d1);
    EXPECT_EQ(p.left.vec(), ExtendedState::from(p.trajectory.states.front()).state().vec());
  }
}

TEST(BoundaryLayer, ZeroAmplitudeIsConstant) {
  const State limit{1.0, -0.5, 1.0};
  LayerOptions o;
  o.amplitude = 0.0;
  const Profile p = boundary_layer(default_gas(), limit, 0, o);
  ASSERT_EQ(p.trajectory.size(), 1u);
  EXPECT_EQ(p.left.vec(), limit.vec());
}

TEST(BoundaryLayer, Errors) {
  test::expect_kind(ErrorKind::no_decaying_direction,
                    [] { boundary_layer(default_gas(), {1.0, 2.0, 1.0}, 0); });
  test::expect_kind(ErrorKind::config,
                    [] { boundary_layer(default_gas(), {1.0, -0.5, 1.0}, 3); });
}

}  // namespace
}  // namespace vprof
