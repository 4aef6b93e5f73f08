#include "vprof/error.hpp"

namespace vprof {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::config: return "config_error";
    case ErrorKind::no_convergence: return "no_convergence";
    case ErrorKind::admissibility: return "admissibility_error";
    case ErrorKind::no_connection: return "no_connection";
    case ErrorKind::non_monotone: return "non_monotone";
    case ErrorKind::no_decaying_direction: return "no_decaying_direction";
    case ErrorKind::step_failure: return "step_failure";
  }
  return "unknown";
}

}  // namespace vprof
