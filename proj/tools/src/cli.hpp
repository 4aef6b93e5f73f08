#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace vprof::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitStructural = 4;

/// Overrides the output directory unless --out is given.
inline constexpr const char* kOutputDirEnv = "VPROF_OUTPUT_DIR";

struct Overrides {
  std::vector<double> sigma;             // replaces sigma_list / reduce.sigma
  std::optional<double> strength;        // replaces rh.strength
  std::optional<std::filesystem::path> out;
  bool verbose = false;
};

/// Named file contents written together.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

/// Writes every artifact to a temporary sibling first and renames afterwards.
/// On failure the temporaries are removed and ErrorKind::config is thrown.
void write_atomically(const std::filesystem::path& dir, const Artifacts& artifacts);

/// 0 when the structural hypotheses hold, kExitStructural otherwise.
int structure_exit_code(const StructureReport& report);

/// Output directory after applying --out and the environment override.
std::filesystem::path resolve_output_dir(const RunConfig& cfg, const Overrides& ov);

/// Runs one subcommand (check, reduce-info, shock, layer). Returns the exit
/// code; failures print a single `vprof-error ...` line to err.
int run(const std::string& command, const std::filesystem::path& config_path,
        const Overrides& ov, std::ostream& out, std::ostream& err);

/// Argument parsing front end used by the executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vprof::cli
