#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/problem.hpp"

namespace plap {

/// One run of the tool: a mode, a problem, and output/probe settings.
/// Everything comes from a single JSON config document; the command line
/// can override out_dir, grid_size, and seed.
struct RunConfig {
  std::string mode;  // solve | verify | converge | sweep
  ProblemSpec spec;
  int grid_size = 1025;
  std::uint64_t seed = 12345;  // seeds probe and test-function draws
  std::vector<double> epsilons;             // converge: regularization ladder
  double reference_epsilon = 1e-4;          // converge: reference solve
  std::vector<double> p_list;               // sweep: exponents
  std::vector<double> f_list;               // sweep: constant source values
  std::string out_dir;                      // empty: report to stdout only
  bool emit_csv = true;
  bool emit_json = true;
  std::string profile_csv;  // verify: audit this profile instead of solving
};

/// Parses a config document for the given mode. Unknown source kinds,
/// missing required sections, or malformed values raise config errors.
RunConfig config_from_json(const nlohmann::json& doc, const std::string& mode);

/// Canonical JSON echo of a config (spec + knobs), used for case hashes and
/// reproducibility records.
nlohmann::json config_echo(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical config serialization, as fixed-width
/// hex. Names sweep outputs and tags reports.
std::string case_id(const RunConfig& config);

// Mode drivers. Each returns the process exit code: 0 when every
// certification check passed, 1 when a check failed, 2 on errors.
int run_solve(const RunConfig& config);
int run_verify(const RunConfig& config);
int run_converge(const RunConfig& config);
int run_sweep(const RunConfig& config);

/// Command-line entry: `plap <solve|verify|converge|sweep> --config <path>
/// [--out <dir>] [--grid <N>] [--seed <k>]`. Errors are reported as a
/// machine-readable JSON object {"error": {"kind", "message"}} on stdout.
int cli_main(int argc, const char* const* argv);

}  // namespace plap
