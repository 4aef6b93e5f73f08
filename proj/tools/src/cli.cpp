#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <system_error>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vprof/error.hpp"
#include "vprof/io.hpp"
#include "vprof/profiles.hpp"
#include "vprof/reduction.hpp"
#include "vprof/structure.hpp"
#include "vprof/system.hpp"

namespace vprof::cli {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
      return kExitValidation;
    default:
      return kExitNumerical;
  }
}

void report_error(std::ostream& err, const std::string& command, std::string_view kind,
                  const std::string& message) {
  err << "vprof-error command=" << command << " kind=" << kind
      << " message=" << nlohmann::json(message).dump() << '\n';
}

std::string g17(double x) { return fmt::format("{:.17g}", x); }

std::string vector_text(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g17(v[i]);
  return s + "]";
}

IntegratorOptions integrator_options(const Tolerances& t) {
  IntegratorOptions o;
  o.tol = t.ode_tol;
  o.rel_tol = t.ode_rel_tol;
  o.guard = t.guard;
  o.h_max = t.h_max;
  o.eq_tol = t.eq_tol;
  return o;
}

int cmd_check(const RunConfig& cfg, const Overrides& ov, std::ostream& out) {
  std::vector<State> samples = sample_box(cfg.box, cfg.samples, cfg.seed);
  samples.insert(samples.end(), cfg.critical_states.begin(), cfg.critical_states.end());
  if (cfg.include_critical_states) {
    for (double sigma : cfg.sigma_list) {
      if (sigma < cfg.box.v.lo || sigma > cfg.box.v.hi) continue;
      State s = cfg.box.center();
      s.v = sigma;
      samples.push_back(s);
    }
  }

  StructureOptions so;
  so.symmetry_tol = cfg.tolerances.symmetry_tol;
  so.rank_tol = cfg.tolerances.rank_tol;
  StructureReport report = check_structure(eulerian_model(cfg.gas), samples, so);
  report.degeneracy.clear();
  for (double sigma : cfg.sigma_list) {
    report.degeneracy.push_back(check_block_linear_degeneracy(
        eulerian_A11(cfg.gas), eulerian_E11(cfg.gas), sigma, samples, cfg.tolerances.rank_tol));
  }

  const std::string text = io::structure_report_text(report);
  write_atomically(resolve_output_dir(cfg, ov), {{"check_report.json", io::structure_report_json(report)},
                                                 {"check_report.txt", text}});
  out << text;
  if (ov.verbose) {
    const State c = cfg.box.center();
    const SystemModel m = eulerian_model(cfg.gas);
    out << fmt::format("matrices at rho={:.6g} v={:.6g} theta={:.6g}\n", c.rho, c.v, c.theta);
    out << "E =\n" << format_matrix(m.E(c)) << "A(u,0) =\n" << format_matrix(m.A(c, {}))
        << "B =\n" << format_matrix(m.B(c));
  }
  return structure_exit_code(report);
}

int cmd_reduce_info(const RunConfig& cfg, const Overrides& ov, std::ostream& out) {
  const double sigma = ov.sigma.empty() ? cfg.reduce.sigma : ov.sigma.front();
  const ExtendedState u = ExtendedState::from(cfg.reduce.U);
  require_admissible(cfg.gas, u.state());
  const SingularOde ode = tw_singular_ode(cfg.gas, sigma);
  const Eigen::VectorXd U = u.vec();
  out << "U = " << vector_text(U) << '\n';
  out << "sigma = " << g17(sigma) << '\n';
  out << "zeta = " << g17(ode.zeta(U)) << '\n';
  out << "F = " << vector_text(ode.F(U)) << '\n';
  if (std::abs(ode.zeta(U)) > cfg.tolerances.guard) {
    out << "rho_x = " << g17(reduce_w(cfg.gas, u, sigma, cfg.tolerances.guard)) << '\n';
  } else {
    out << "rho_x = undefined (|zeta| <= guard)\n";
  }
  return kExitOk;
}

Artifacts profile_artifacts(const std::string& stem, const Profile& p, const std::string& title) {
  return {{stem + ".csv", io::trajectory_csv(p.trajectory)},
          {stem + ".json", io::profile_json(p)},
          {stem + ".gp", io::plot_script(stem + ".csv", title)}};
}

int cmd_shock(const RunConfig& cfg, const Overrides& ov, std::ostream& out) {
  const double strength = ov.strength.value_or(cfg.rh.strength);
  if (!(strength >= 0.0)) throw Error(ErrorKind::config, "strength must be >= 0");
  RhOptions ro;
  ro.tol = cfg.tolerances.rh_tol;
  const RHPair pair = solve_rh(cfg.gas, cfg.rh.U_minus, cfg.rh.family, strength, ro);

  ShootOptions so;
  so.eps = cfg.tolerances.shoot_eps;
  so.end_tol = cfg.tolerances.end_tol;
  so.integrator = integrator_options(cfg.tolerances);
  Profile p = shock_profile(cfg.gas, pair, so);
  if (p.trajectory.size() > 1) {
    const GilbargOracle oracle = gilbarg_oracle(cfg.gas, pair, so);
    p.diagnostics.oracle_deviation = compare_profiles(p, oracle_profile(cfg.gas, pair, oracle));
  } else {
    p.diagnostics.oracle_deviation = 0.0;
  }

  write_atomically(resolve_output_dir(cfg, ov),
                   profile_artifacts("shock_profile", p,
                                     fmt::format("family {} shock, strength {:g}", pair.family,
                                                 strength)));
  out << fmt::format("shock sigma={} samples={} rh_residual={:.3g} flux_drift={:.3g} "
                     "oracle_deviation={:.3g} termination={}\n",
                     g17(p.sigma), p.trajectory.size(), p.diagnostics.rh_residual,
                     p.diagnostics.flux_drift, p.diagnostics.oracle_deviation,
                     p.diagnostics.termination);
  return kExitOk;
}

int cmd_layer(const RunConfig& cfg, const Overrides& ov, std::ostream& out) {
  LayerOptions lo;
  lo.amplitude = cfg.layer.amplitude;
  lo.length = cfg.layer.length;
  lo.max_departure = cfg.layer.max_departure;
  lo.integrator = integrator_options(cfg.tolerances);
  const Profile p = boundary_layer(cfg.gas, cfg.layer.limit_state, cfg.layer.direction_index, lo);

  write_atomically(resolve_output_dir(cfg, ov),
                   profile_artifacts("layer_profile", p, "boundary layer"));
  out << fmt::format("layer samples={} flux_drift={:.3g} termination={} rescaled={}\n",
                     p.trajectory.size(), p.diagnostics.flux_drift, p.diagnostics.termination,
                     p.diagnostics.rescaled);
  return kExitOk;
}

}  // namespace

void write_atomically(const fs::path& dir, const Artifacts& artifacts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory " + dir.string());

  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ignore;
    for (const auto& t : temps) fs::remove(t, ignore);
  };
  for (const auto& [name, content] : artifacts) {
    const fs::path tmp = dir / ("." + name + ".tmp");
    temps.push_back(tmp);
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) {
      cleanup();
      throw Error(ErrorKind::config, "cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    fs::rename(temps[i], dir / artifacts[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorKind::config, "cannot rename into " + (dir / artifacts[i].first).string());
    }
  }
}

int structure_exit_code(const StructureReport& report) {
  return report.hypotheses_hold() ? kExitOk : kExitStructural;
}

fs::path resolve_output_dir(const RunConfig& cfg, const Overrides& ov) {
  if (ov.out) return *ov.out;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

int run(const std::string& command, const fs::path& config_path, const Overrides& ov,
        std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(config_path);
    if (!ov.sigma.empty()) {
      cfg.sigma_list = ov.sigma;
      cfg.reduce.sigma = ov.sigma.front();
    }
    if (ov.strength) cfg.rh.strength = *ov.strength;
    cfg.validate();

    if (command == "check") return cmd_check(cfg, ov, out);
    if (command == "reduce-info") return cmd_reduce_info(cfg, ov, out);
    if (command == "shock") return cmd_shock(cfg, ov, out);
    if (command == "layer") return cmd_layer(cfg, ov, out);
    report_error(err, command, "config_error", "unknown command");
    return kExitValidation;
  } catch (const Error& e) {
    report_error(err, command, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    report_error(err, command, "io_error", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    report_error(err, command, "internal_error", e.what());
    return kExitNumerical;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Viscous profile toolkit for the compressible Navier-Stokes equations", "vprof"};
  app.require_subcommand(1);

  std::string command;
  fs::path config_path;
  Overrides ov;
  double strength = 0.0;
  std::string out_dir;

  const std::pair<const char*, const char*> commands[] = {
      {"check", "Structural hypotheses and block linear degeneracy on a state box"},
      {"reduce-info", "Print F(U) and zeta(U) of the reduced singular ODE"},
      {"shock", "Viscous shock profile with Rankine-Hugoniot endpoints"},
      {"layer", "Steady boundary layer approaching a limit state"},
  };
  std::vector<CLI::Option*> strength_opts, out_opts;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", config_path, "JSON run configuration")->required();
    sub->add_option("--sigma", ov.sigma, "Override sigma_list (check) or reduce.sigma");
    strength_opts.push_back(sub->add_option("--strength", strength, "Override rh.strength"));
    out_opts.push_back(sub->add_option("--out", out_dir, "Output directory"));
    sub->add_flag("--verbose", ov.verbose, "Print matrices and extra detail");
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, command.empty() ? "none" : command, "usage_error", e.what());
    return kExitValidation;
  }
  for (auto* o : strength_opts) {
    if (o->count()) ov.strength = strength;
  }
  for (auto* o : out_opts) {
    if (o->count()) ov.out = out_dir;
  }
  return run(command, config_path, ov, out, err);
}

}  // namespace vprof::cli
