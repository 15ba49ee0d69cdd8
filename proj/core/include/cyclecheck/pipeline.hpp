#pragma once

#include <iosfwd>

#include "cyclecheck/config.hpp"

namespace cyclecheck {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitOutput = 3;
inline constexpr int kExitGridMismatch = 4;

struct RunOptions {
  /// Emit one JSON progress line per completed stage to diagnostics.
  bool verbose = false;
  /// Error and progress sink; null means standard error.
  std::ostream* diagnostics = nullptr;
};

/// All three entry points return a process exit code instead of throwing:
/// 0 ok, 1 bad configuration, 2 unreadable or malformed input, 3 output
/// trouble, 4 grid mismatch. Diagnostics go to options.diagnostics.

/// Ingest, analyze, and report one data set into <out_dir>/<role>/.
int run_intrinsic(const RunConfig& config, DataRole role,
                  const RunOptions& options = {});

/// Analyze both data sets (in memory), compare them, and write the combined
/// report into <out_dir>/compare/. Pre-existing intrinsic outputs under the
/// same out_dir must match the configured grid; stale ones exit with 4.
int run_compare(const RunConfig& config, const RunOptions& options = {});

/// Both intrinsic runs, then the comparison. Output trees are byte-identical
/// to running intrinsic(osm), intrinsic(reference), compare in sequence. The
/// two data sets are processed concurrently when jobs allows.
int run_full(const RunConfig& config, const RunOptions& options = {});

}  // namespace cyclecheck
