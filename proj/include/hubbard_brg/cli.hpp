#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hubbard_brg/geometry.hpp"

namespace hbrg::cli {

enum class Command { sector_spectrum, flow, critical, gap, sweep };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::flow;
  BlockKind block = BlockKind::hex7;
  double u0 = 12.5;
  double t0 = 1.0;
  int levels = 6;
  double tol = 1e-3;
  std::vector<double> u0_grid;
  std::vector<int> n_list;
  Format format = Format::csv;
  std::optional<std::string> out;
  bool timestamp = true;
  int threads = 1;
};

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2, kNonConvergence = 3 };

/// "2,4,6" or "min:max:count" (inclusive, evenly spaced).
std::vector<double> parse_u0_grid(std::string_view spec);
std::vector<int> parse_n_list(std::string_view spec);

/// 17 significant digits, round-trip safe; "nan" for NaN.
std::string format_number(double x);

/// Runs one command and writes its table to `out`. Errors are reported on
/// `err`; the return value is the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including argv[0]) and runs. Used by the executable and tests.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hbrg::cli
