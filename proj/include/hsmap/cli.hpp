#pragma once

// Command-line front end. One job per invocation:
//
//   hsmap solve     --family sphere --g 1 --m0 3 --m1 3 --k 1 [--scan]
//   hsmap spectrum  --family su3 --solution identity --jmax 5
//   hsmap verify    --family sphere --g 2 --m0 2 --m1 2 --solution identity --tol 1e-6
//   hsmap scan      --family sphere --g 2 --m0 3 --m1 3
//   hsmap reproduce
//
// Every flag mirrors a key of the INI config file (--config FILE):
//
//   [problem]  family g m0 m1 k solution
//   [numeric]  tol xmax jmax amp_min amp_max grid scan
//   [output]   out formats
//
// Flags override the file. Exit codes: 0 success, 1 configuration error,
// 2 numeric failure (stage named on stderr), 3 verification failure.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hsmap/io.hpp"
#include "hsmap/problems.hpp"
#include "hsmap/shooting.hpp"

namespace hsmap {

inline constexpr const char* kOutputDirEnv = "HSMAP_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "hsmap-out";

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2, kExitVerification = 3 };

struct JobConfig {
  std::string command;
  ProblemSpec problem;
  // "identity", "linear", a closed-form name, or the path of a stored
  // profile JSON. Empty selects "identity" where a solution is needed.
  std::string solution;
  double tol = 1e-8;
  double x_max = 12.0;
  int j_max = 10;
  double amp_min = kDefaultAmplitudeRange.first;
  double amp_max = kDefaultAmplitudeRange.second;
  int grid = 200;
  bool scan = false;
  std::filesystem::path output_dir;
  std::vector<std::string> formats{"json", "csv", "svg"};

  bool wants(const std::string& format) const;
};

// Default tolerance of each command.
double default_tol(const std::string& command);

// Builds a validated JobConfig from argv (argv[0] is the program name).
// Throws Error(Config) on invalid input.
JobConfig parse_job(int argc, const char* const* argv);

// The resolved configuration embedded in every artifact.
Json to_json(const JobConfig& config);

// Runs the job; messages go to out/err. Returns the exit code.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

// parse_job + run with the exit-code mapping for configuration errors.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsmap
