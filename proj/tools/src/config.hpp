#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vprof/gas.hpp"
#include "vprof/structure.hpp"

namespace vprof::cli {

struct Tolerances {
  double ode_tol = 1e-10;
  double ode_rel_tol = 1e-12;
  double guard = 1e-6;
  double h_max = 0.05;
  double eq_tol = 1e-12;
  double rank_tol = 1e-10;
  double symmetry_tol = 1e-12;
  double rh_tol = 1e-10;
  double end_tol = 1e-6;
  double shoot_eps = 1e-6;
};

struct RhBlock {
  int family = 1;
  double strength = 0.3;
  State U_minus{1.0, 0.0, 1.0};
};

struct LayerBlock {
  State limit_state{1.0, -0.5, 1.0};
  int direction_index = 0;
  double amplitude = 1e-3;
  double length = 20.0;
  double max_departure = 0.5;
};

struct ReduceBlock {
  Eigen::VectorXd U = (Eigen::VectorXd(5) << 1.0, 0.5, 1.0, 1.0, 0.0).finished();
  double sigma = 0.0;
};

struct RunConfig {
  GasModel gas;
  StateBox box;
  int samples = 500;
  std::uint64_t seed = 0;
  std::vector<double> sigma_list{0.0};
  /// Adds the box center with v = sigma for every sigma inside the v range.
  bool include_critical_states = true;
  std::vector<State> critical_states;
  RhBlock rh;
  LayerBlock layer;
  ReduceBlock reduce;
  Tolerances tolerances;
  std::filesystem::path output_dir = "vprof_out";

  /// Throws ErrorKind::config on any violated invariant.
  void validate() const;
};

/// Parses and validates. Unknown keys are rejected; `seed` is mandatory.
/// Throws ErrorKind::config.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace vprof::cli
