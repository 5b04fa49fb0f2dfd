#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssac::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kUsageError = 2,
  kRecodeFailed = 3,
  kRankDeficient = 4,
};

/// Runs the `ssac` command line. `args` excludes the program name.
///
///   ssac experiment {solution-existence|full-rank|header-table|line-network} [flags]
///   ssac encode  --in ORIGINALS --out PACKETS --n N [--m M --q Q --k K --seed S]
///   ssac recode  --in PACKETS [--out PACKETS] [--k-take K] [--seed S]
///   ssac decode  --in PACKETS --out ORIGINALS
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssac::cli
