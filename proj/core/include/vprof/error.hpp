#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vprof {

enum class ErrorKind {
  domain,                 // argument outside the admissible region of a closure
  singularity,            // |zeta| at or below the guard
  config,                 // malformed or inconsistent configuration
  no_convergence,         // Newton iteration exhausted its budget
  admissibility,          // iterate or state left the admissible box
  no_connection,          // shooting failed to reach the target equilibrium
  non_monotone,           // matching variable not strictly monotone
  no_decaying_direction,  // linearization has no stable non-center direction
  step_failure,           // integrator step size underflow or budget exhausted
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vprof
