#pragma once

#include <string>

#include "vprof/profiles.hpp"
#include "vprof/sode.hpp"
#include "vprof/structure.hpp"

namespace vprof::io {

/// CSV with header `x,tau,rho,v,theta,z1,z2`; tau is left empty for direct
/// integrations. Values use round-trip precision.
std::string trajectory_csv(const Trajectory& tr);

/// Termination status and step statistics of one integration.
std::string trajectory_json(const Trajectory& tr);

/// Diagnostics sidecar of a profile:
/// {kind, sigma, endpoints, rh_residual, flux_drift, oracle_deviation,
///  extended_residual, termination, ...}. Non-finite numbers become null.
std::string profile_json(const Profile& profile);

std::string structure_report_json(const StructureReport& report);
std::string structure_report_text(const StructureReport& report);

/// gnuplot script plotting (x, rho), (x, v) and (x, theta) from the CSV.
std::string plot_script(const std::string& csv_name, const std::string& title);

}  // namespace vprof::io
