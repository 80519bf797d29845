#pragma once

#include "sigcon/cli/experiments.hpp"
#include "sigcon/cli/manifest.hpp"
#include "sigcon/cli/metrics.hpp"

#include <filesystem>
#include <iosfwd>

namespace sigcon {

enum ExitCode : int { exit_converged = 0, exit_config_error = 1, exit_max_iters = 2 };

/// Environment variable naming the directory relative output paths are
/// resolved against.
inline constexpr const char* kOutputRootEnv = "SIGCON_OUTPUT_ROOT";

/// Value of SIGCON_OUTPUT_ROOT, or the current directory.
std::filesystem::path output_root_from_env();

struct OutputOptions {
  std::filesystem::path directory;
  /// Write measured seconds instead of "nan" in traces.
  bool wall_clock = false;
  /// Keep x_n at every trace record and write iterates.csv.
  bool snapshots = false;
  /// Also compute x_inf under full activation and write xinf.csv.
  bool reference = false;
  double reference_tol = 1e-12;
  std::size_t reference_max_iters = 200000;
};

OutputOptions output_options(const Manifest& m, const std::filesystem::path& root);

struct RunReport {
  int exit_code = exit_config_error;
  std::filesystem::path directory;
  nlohmann::json summary;
};

/// Generates, solves and writes recovered.csv, trace.csv, summary.json and
/// PGM images for grid blocks. Configuration problems propagate as
/// ManifestError.
RunReport run_experiment(const Manifest& manifest, const std::filesystem::path& output_root);

/// Loads and runs a manifest file, reporting errors on `err`. Returns the
/// process exit code.
int run_manifest_file(const std::filesystem::path& path, const std::filesystem::path& output_root,
                      std::ostream& out, std::ostream& err);

/// Writes manifest.json plus ground truth and observations for `kind` into
/// `directory`.
void generate_files(const std::string& kind, std::uint64_t seed,
                    const std::filesystem::path& directory);

/// Relative-error series from a run directory's iterates against x_inf.
std::vector<ErrorPoint> trace_plot(const std::filesystem::path& iterates_csv,
                                   const std::filesystem::path& xinf_csv);

/// Writes a point as CSV plus one PGM per grid block.
void write_point(const std::filesystem::path& directory, const std::string& name,
                 const SpacePoint& x);

} // namespace sigcon
