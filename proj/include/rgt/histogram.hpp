#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgt/results_io.hpp"

namespace rgt {

enum class HistogramMetric { success_rate, survival };

struct HistogramSpec {
  HistogramMetric metric = HistogramMetric::survival;
  int bins = 20;                // equal-width bins over the pooled value range
  std::vector<double> edges;    // explicit edges; overrides `bins` when nonempty
};

struct HistogramRow {
  std::string group;
  double bin_lo = 0.0;
  double bin_hi = 0.0;
  std::int64_t count = 0;
  std::optional<double> rate;  // success_rate metric only
};

// Survival: one row per bin per policy, bins shared across policies; bins are
// half-open except the last, values outside explicit edges are not counted.
// Success rate: one row per policy for the "successful" indicator bin
// [0.5, 1.5) with the fraction of successful sessions in `rate`.
// Throws UsageError when the metric does not match the results mode.
std::vector<HistogramRow> compute_histogram(const LoadedResults& results,
                                            const HistogramSpec& spec);

void write_histogram_csv(std::ostream& out, const RunManifest& manifest,
                         const HistogramSpec& spec, const std::vector<HistogramRow>& rows);

HistogramMetric parse_histogram_metric(const std::string& name);

}  // namespace rgt
