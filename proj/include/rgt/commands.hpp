#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgt/histogram.hpp"

namespace rgt::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kNumeric = 4 };

struct GlobalOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's base_seed
  unsigned threads = 0;               // 0: hardware concurrency
  bool csv = false;                   // also write per-session CSV
  bool quiet = false;
};

enum class TableFormat { csv, pretty };

// Runs the experiment in `config_path` and writes results JSON to `out_path`.
// With options.csv the per-session table goes to `<out_path stem>.sessions.csv`.
int cmd_run(const std::string& config_path, const std::string& out_path,
            const GlobalOptions& options, std::ostream& out, std::ostream& err);

// Pairwise ANOVA of every policy against `control_label`, then an omnibus row
// over all policies. The metric is the success indicator for horizon-mode
// results and survival rounds for bankruptcy-mode results.
int cmd_anova(const std::string& results_path, const std::string& control_label,
              TableFormat format, std::ostream& out, std::ostream& err);

int cmd_analyze_topreward(const std::vector<double>& thetas, const std::vector<int>& payouts,
                          std::ostream& out, std::ostream& err);

int cmd_histogram(const std::string& results_path, const HistogramSpec& spec,
                  const std::string& out_path, std::ostream& out, std::ostream& err);

std::string sessions_csv_path(const std::string& out_path);

}  // namespace rgt::cli
