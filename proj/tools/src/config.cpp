#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vprof/error.hpp"

namespace vprof::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::config, msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key + " must be a number");
  return v.get<double>();
}

template <class T>
void read(const json& j, const std::string& key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  if constexpr (std::is_same_v<T, double>) {
    out = get_number(j, key, where);
  } else if constexpr (std::is_same_v<T, int>) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
    out = v.get<int>();
  } else if constexpr (std::is_same_v<T, bool>) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) fail(where + "." + key + " must be a boolean");
    out = v.get<bool>();
  }
}

State read_state(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 3) fail(where + " must have 3 entries (rho, v, theta)");
    for (const auto& e : j) {
      if (!e.is_number()) fail(where + " entries must be numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }
  check_keys(j, {"rho", "v", "theta"}, where);
  State s;
  read(j, "rho", s.rho, where);
  read(j, "v", s.v, where);
  read(j, "theta", s.theta, where);
  return s;
}

Interval read_interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where + " must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void read_gas(const json& j, GasModel& gas) {
  check_keys(j, {"R", "gamma", "nu", "k", "a", "b", "c_rho"}, "gas");
  read(j, "R", gas.R, "gas");
  read(j, "gamma", gas.gamma, "gas");
  read(j, "nu", gas.nu.coeff, "gas");
  read(j, "k", gas.k.coeff, "gas");
  read(j, "a", gas.nu.exponent, "gas");
  read(j, "b", gas.k.exponent, "gas");
  read(j, "c_rho", gas.c_rho, "gas");
}

void read_tolerances(const json& j, Tolerances& t) {
  const std::string w = "tolerances";
  check_keys(j,
             {"ode_tol", "ode_rel_tol", "guard", "h_max", "eq_tol", "rank_tol", "symmetry_tol",
              "rh_tol", "end_tol", "shoot_eps"},
             w);
  read(j, "ode_tol", t.ode_tol, w);
  read(j, "ode_rel_tol", t.ode_rel_tol, w);
  read(j, "guard", t.guard, w);
  read(j, "h_max", t.h_max, w);
  read(j, "eq_tol", t.eq_tol, w);
  read(j, "rank_tol", t.rank_tol, w);
  read(j, "symmetry_tol", t.symmetry_tol, w);
  read(j, "rh_tol", t.rh_tol, w);
  read(j, "end_tol", t.end_tol, w);
  read(j, "shoot_eps", t.shoot_eps, w);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void RunConfig::validate() const {
  gas.validate();
  box.validate(gas);
  if (samples < 1) fail("samples must be at least 1");
  for (double s : sigma_list) {
    if (!std::isfinite(s)) fail("sigma_list entries must be finite");
  }
  for (const auto& s : critical_states) {
    if (!box.contains(s)) fail("critical state outside the box");
  }
  const std::pair<const char*, double> tols[] = {
      {"ode_tol", tolerances.ode_tol},   {"ode_rel_tol", tolerances.ode_rel_tol},
      {"guard", tolerances.guard},       {"h_max", tolerances.h_max},
      {"eq_tol", tolerances.eq_tol},     {"rank_tol", tolerances.rank_tol},
      {"symmetry_tol", tolerances.symmetry_tol}, {"rh_tol", tolerances.rh_tol},
      {"end_tol", tolerances.end_tol},   {"shoot_eps", tolerances.shoot_eps},
  };
  for (const auto& [name, value] : tols) {
    if (!positive(value)) fail(std::string("tolerance ") + name + " must be positive");
  }
  if (rh.family != 1 && rh.family != 3) fail("rh.family must be 1 or 3");
  if (!(rh.strength >= 0.0) || !std::isfinite(rh.strength)) fail("rh.strength must be >= 0");
  if (layer.direction_index < 0) fail("layer.direction_index must be >= 0");
  if (!std::isfinite(layer.amplitude)) fail("layer.amplitude must be finite");
  if (!positive(layer.length)) fail("layer.length must be positive");
  if (!positive(layer.max_departure)) fail("layer.max_departure must be positive");
  if (!reduce.U.allFinite() || !std::isfinite(reduce.sigma)) fail("reduce entries must be finite");
  if (output_dir.empty()) fail("output_dir must not be empty");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  check_keys(j,
             {"gas", "box", "samples", "seed", "sigma_list", "include_critical_states",
              "critical_states", "rh", "layer", "reduce", "tolerances", "output_dir"},
             "config");
  RunConfig c;
  try {
    if (!j.contains("seed")) fail("seed is required");
    if (!j["seed"].is_number_unsigned()) fail("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("gas")) read_gas(j["gas"], c.gas);
    if (j.contains("box")) {
      check_keys(j["box"], {"rho", "v", "theta"}, "box");
      if (j["box"].contains("rho")) c.box.rho = read_interval(j["box"]["rho"], "box.rho");
      if (j["box"].contains("v")) c.box.v = read_interval(j["box"]["v"], "box.v");
      if (j["box"].contains("theta")) c.box.theta = read_interval(j["box"]["theta"], "box.theta");
    }
    read(j, "samples", c.samples, "config");
    if (j.contains("sigma_list")) {
      if (!j["sigma_list"].is_array()) fail("sigma_list must be an array");
      c.sigma_list.clear();
      for (const auto& s : j["sigma_list"]) {
        if (!s.is_number()) fail("sigma_list entries must be numbers");
        c.sigma_list.push_back(s.get<double>());
      }
    }
    read(j, "include_critical_states", c.include_critical_states, "config");
    if (j.contains("critical_states")) {
      if (!j["critical_states"].is_array()) fail("critical_states must be an array");
      for (const auto& s : j["critical_states"]) {
        c.critical_states.push_back(read_state(s, "critical_states[]"));
      }
    }
    if (j.contains("rh")) {
      const auto& r = j["rh"];
      check_keys(r, {"family", "strength", "U_minus"}, "rh");
      read(r, "family", c.rh.family, "rh");
      read(r, "strength", c.rh.strength, "rh");
      if (r.contains("U_minus")) c.rh.U_minus = read_state(r["U_minus"], "rh.U_minus");
    }
    if (j.contains("layer")) {
      const auto& l = j["layer"];
      check_keys(l, {"limit_state", "direction_index", "amplitude", "length", "max_departure"},
                 "layer");
      if (l.contains("limit_state")) c.layer.limit_state = read_state(l["limit_state"], "layer");
      read(l, "direction_index", c.layer.direction_index, "layer");
      read(l, "amplitude", c.layer.amplitude, "layer");
      read(l, "length", c.layer.length, "layer");
      read(l, "max_departure", c.layer.max_departure, "layer");
    }
    if (j.contains("reduce")) {
      const auto& r = j["reduce"];
      check_keys(r, {"U", "sigma"}, "reduce");
      if (r.contains("U")) {
        const auto& u = r["U"];
        if (!u.is_array() || u.size() != 5) fail("reduce.U must have 5 entries");
        for (int i = 0; i < 5; ++i) {
          if (!u[i].is_number()) fail("reduce.U entries must be numbers");
          c.reduce.U[i] = u[i].get<double>();
        }
      }
      read(r, "sigma", c.reduce.sigma, "reduce");
    }
    if (j.contains("tolerances")) read_tolerances(j["tolerances"], c.tolerances);
    if (j.contains("output_dir")) {
      if (!j["output_dir"].is_string()) fail("output_dir must be a string");
      c.output_dir = j["output_dir"].get<std::string>();
    }
  } catch (const json::exception& e) {
    fail(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace vprof::cli
