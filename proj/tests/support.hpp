#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "vprof/error.hpp"
#include "vprof/gas.hpp"
#include "vprof/reduction.hpp"

namespace vprof::test {

inline GasModel default_gas() { return GasModel{}; }

/// Density-dependent transport so that nu' and k' terms are exercised.
inline GasModel power_law_gas() {
  GasModel g;
  g.nu = {0.8, 0.7};
  g.k = {1.3, -0.4};
  return g;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  State state(double rho_lo = 0.5, double rho_hi = 2.0, double v_lo = -1.0, double v_hi = 1.0,
              double th_lo = 0.5, double th_hi = 2.0) {
    return {uniform(rho_lo, rho_hi), uniform(v_lo, v_hi), uniform(th_lo, th_hi)};
  }

  /// Extended state with |v - sigma| >= gap and z in [-1, 1]^2.
  ExtendedState extended(double sigma, double gap) {
    ExtendedState u;
    const State s = state();
    u.rho = s.rho;
    u.theta = s.theta;
    do {
      u.v = uniform(sigma - 1.5, sigma + 1.5);
    } while (std::abs(u.v - sigma) < gap);
    u.z = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    return u;
  }

  Eigen::Vector2d unit2() {
    const double a = uniform(0.0, 2.0 * M_PI);
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::mt19937_64 gen_;
};

template <class Fn>
void expect_kind(ErrorKind kind, const Fn& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

inline bool all_finite(const std::vector<Eigen::VectorXd>& vs) {
  for (const auto& v : vs) {
    if (!v.allFinite()) return false;
  }
  return true;
}

}  // namespace vprof::test
