#include "vprof/io.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace vprof::io {

namespace {

using nlohmann::ordered_json;

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json state_json(const State& s) {
  return {{"rho", number(s.rho)}, {"v", number(s.v)}, {"theta", number(s.theta)}};
}

std::string g17(double x) { return fmt::format("{:.17g}", x); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "x,tau,rho,v,theta,z1,z2\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& s = tr.states[i];
    out += g17(tr.x[i]);
    out += ',';
    if (tr.rescaled) out += g17(tr.tau[i]);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      out += ',';
      out += g17(s[k]);
    }
    out += '\n';
  }
  return out;
}

namespace {

ordered_json trajectory_object(const Trajectory& tr) {
  ordered_json j;
  j["mode"] = tr.rescaled ? "rescaled" : "direct";
  j["termination"] = std::string(to_string(tr.termination));
  j["termination_zeta"] = number(tr.termination_zeta);
  j["samples"] = tr.size();
  j["accepted"] = tr.stats.accepted;
  j["rejected"] = tr.stats.rejected;
  j["rhs_evals"] = tr.stats.rhs_evals;
  j["min_abs_zeta"] = number(tr.stats.min_abs_zeta);
  j["zeta_sign_changes"] = tr.stats.zeta_sign_changes;
  j["sign_change_x"] = tr.stats.sign_change_x;
  return j;
}

}  // namespace

std::string trajectory_json(const Trajectory& tr) { return dump(trajectory_object(tr)); }

std::string profile_json(const Profile& profile) {
  const auto& d = profile.diagnostics;
  const bool shock = profile.kind == ProfileKind::shock;
  ordered_json j;
  j["kind"] = shock ? "shock" : "boundary_layer";
  j["sigma"] = number(profile.sigma);
  if (shock) {
    j["endpoints"] = {{"minus", state_json(profile.left)}, {"plus", state_json(profile.right)}};
  } else {
    j["endpoints"] = {{"trace", state_json(profile.left)}, {"limit", state_json(profile.right)}};
  }
  j["rh_residual"] = number(d.rh_residual);
  j["flux_drift"] = number(d.flux_drift);
  j["extended_residual"] = number(d.extended_residual);
  j["oracle_deviation"] = number(d.oracle_deviation);
  j["termination"] = d.termination;
  j["shooting"] = d.shooting;
  j["rescaled"] = d.rescaled;
  j["zeta_sign_changes"] = d.zeta_sign_changes;
  j["min_abs_zeta"] = number(d.min_abs_zeta);
  if (!profile.trajectory.empty()) {
    j["x_range"] = {number(profile.trajectory.x.front()), number(profile.trajectory.x.back())};
  }
  j["integration"] = trajectory_object(profile.trajectory);
  return dump(j);
}

std::string structure_report_json(const StructureReport& r) {
  ordered_json j;
  j["system"] = r.system;
  j["n_samples"] = r.n_samples;
  j["hypotheses_hold"] = r.hypotheses_hold();
  j["E"] = {{"spd", r.e_spd},
            {"min_eigenvalue", number(r.e_min_eigenvalue)},
            {"max_asymmetry", number(r.e_max_asymmetry)}};
  j["A0"] = {{"symmetric", r.a0_symmetric}, {"max_asymmetry", number(r.a0_max_asymmetry)}};
  j["B"] = {{"block_form", r.b_block_form},
            {"rank_constant", r.b_rank_constant},
            {"rank", r.b_rank},
            {"coercive", r.b_coercive},
            {"c_B", number(r.c_b)}};
  ordered_json deg = ordered_json::array();
  for (const auto& v : r.degeneracy) {
    ordered_json e;
    e["sigma"] = number(v.sigma);
    e["satisfied"] = v.satisfied;
    std::vector<int> distinct = v.kernel_dims;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    e["kernel_dimensions"] = distinct;
    ordered_json w = ordered_json::array();
    for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
      ordered_json ws = state_json(v.witnesses[i]);
      ws["kernel_dimension"] = v.witness_dims[i];
      w.push_back(ws);
    }
    e["witnesses"] = w;
    deg.push_back(e);
  }
  j["degeneracy"] = deg;
  return dump(j);
}

std::string structure_report_text(const StructureReport& r) {
  auto yes = [](bool b) { return b ? "yes" : "NO"; };
  std::string out;
  out += fmt::format("system: {}\nsamples: {}\n", r.system, r.n_samples);
  out += fmt::format("E symmetric positive definite: {} (min eigenvalue {:.6g}, asymmetry {:.3g})\n",
                     yes(r.e_spd), r.e_min_eigenvalue, r.e_max_asymmetry);
  out += fmt::format("A(u,0) symmetric: {} (asymmetry {:.3g})\n", yes(r.a0_symmetric),
                     r.a0_max_asymmetry);
  out += fmt::format("B block form diag(0, b): {}\n", yes(r.b_block_form));
  out += fmt::format("B rank constant: {} (rank {})\n", yes(r.b_rank_constant), r.b_rank);
  out += fmt::format("b coercive: {} (c_B {:.6g})\n", yes(r.b_coercive), r.c_b);
  out += fmt::format("hypotheses hold: {}\n", yes(r.hypotheses_hold()));
  for (const auto& v : r.degeneracy) {
    std::vector<int> distinct = v.kernel_dims;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::string dims;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      dims += (i ? "," : "") + std::to_string(distinct[i]);
    }
    out += fmt::format("block linear degeneracy at sigma={:.6g}: {} (kernel dimensions {{{}}})\n",
                       v.sigma, v.satisfied ? "satisfied" : "violated", dims);
    for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
      const auto& s = v.witnesses[i];
      out += fmt::format("  witness rho={:.6g} v={:.6g} theta={:.6g} kernel dimension {}\n", s.rho,
                         s.v, s.theta, v.witness_dims[i]);
    }
  }
  return out;
}

std::string plot_script(const std::string& csv_name, const std::string& title) {
  std::string out;
  out += "set datafile separator ','\n";
  out += "set terminal pngcairo size 900,900\n";
  out += fmt::format("set output '{}.png'\n", csv_name.substr(0, csv_name.rfind('.')));
  out += fmt::format("set multiplot layout 3,1 title '{}'\n", title);
  out += "set xlabel 'x'\n";
  out += "set key autotitle columnhead\n";
  out += "unset key\n";
  out += fmt::format("set ylabel 'rho'\nplot '{}' using 1:3 with lines\n", csv_name);
  out += fmt::format("set ylabel 'v'\nplot '{}' using 1:4 with lines\n", csv_name);
  out += fmt::format("set ylabel 'theta'\nplot '{}' using 1:5 with lines\n", csv_name);
  out += "unset multiplot\n";
  return out;
}

}  // namespace vprof::io
