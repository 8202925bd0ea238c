#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zollfins {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,        ///< I/O failure or invalid input
  kExitGeometry = 2,  ///< G <= 0, convexity violation, chart exit
  kExitVerify = 3,    ///< a verification check failed
};

struct RunConfig {
  std::string command;
  std::string h = "0";            ///< profile literal a1,a3,...
  std::vector<double> R;          ///< chart latitudes
  std::vector<double> c;          ///< Clairaut constants
  double tol = 1e-10;
  int samples = 0;                ///< 0: per-command default
  std::filesystem::path out = ".";
  std::string side = "zoll";
  double t_end = 6.283185307179586;
  std::optional<std::array<double, 2>> start;
  double dir = 0.0;
  int width = 640;
  int height = 640;

  /// Throws DomainError on out-of-range values.
  void validate() const;
};

/// Comma-separated reals; whitespace ignored.
std::vector<double> parse_real_list(const std::string& text);

int cmd_curvature(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_indicatrix(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_geodesic(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments (flags, then `--config` key=value file) and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zollfins
