#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/config.hpp"

namespace qmem {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

std::string_view version();

struct RunOptions {
  std::optional<std::string> outdir;  // overrides config.outdir
  int grid_scale = 1;                 // multiplies n_t, n_tp, n_z
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> files;  // paths written, summary.json last
};

/// Executes the configured experiment and writes its CSVs plus summary.json
/// into the output directory. Errors are reported on `diag`; the exit code
/// is kExitNumerical for failed numerical checks or consistency errors and
/// kExitUsage for everything else.
RunOutcome run(const RunConfig& config, const RunOptions& options, std::ostream& diag);

}  // namespace qmem
