#include "rgt/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rgt/error.hpp"

namespace rgt {

std::vector<HistogramRow> compute_histogram(const LoadedResults& results,
                                            const HistogramSpec& spec) {
  std::vector<HistogramRow> rows;

  if (spec.metric == HistogramMetric::success_rate) {
    if (results.mode != SessionMode::horizon)
      throw UsageError("histogram: success_rate needs horizon-mode results");
    for (const LoadedPolicy& p : results.policies) {
      std::int64_t ok = 0;
      for (const SessionResult& r : p.sessions) ok += is_success(r, results.success_rule) ? 1 : 0;
      rows.push_back({p.label, 0.5, 1.5, ok,
                      static_cast<double>(ok) / static_cast<double>(p.sessions.size())});
    }
    return rows;
  }

  if (results.mode != SessionMode::bankruptcy)
    throw UsageError("histogram: survival needs bankruptcy-mode results");

  std::vector<double> edges = spec.edges;
  if (edges.empty()) {
    if (spec.bins < 1) throw UsageError("histogram: bins must be >= 1");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const LoadedPolicy& p : results.policies)
      for (const SessionResult& r : p.sessions) {
        lo = std::min(lo, static_cast<double>(r.rounds_played));
        hi = std::max(hi, static_cast<double>(r.rounds_played));
      }
    if (hi <= lo) hi = lo + 1.0;
    edges.resize(static_cast<std::size_t>(spec.bins) + 1);
    for (int i = 0; i <= spec.bins; ++i) edges[i] = lo + (hi - lo) * i / spec.bins;
    edges.back() = hi;
  }
  if (edges.size() < 2) throw UsageError("histogram: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw UsageError("histogram: bin edges must be strictly increasing");

  const std::size_t n_bins = edges.size() - 1;
  for (const LoadedPolicy& p : results.policies) {
    std::vector<std::int64_t> counts(n_bins, 0);
    for (const SessionResult& r : p.sessions) {
      const double v = static_cast<double>(r.rounds_played);
      if (v < edges.front() || v > edges.back()) continue;
      auto it = std::upper_bound(edges.begin(), edges.end(), v);
      std::size_t bin = static_cast<std::size_t>(it - edges.begin());
      bin = bin == 0 ? 0 : bin - 1;
      ++counts[std::min(bin, n_bins - 1)];
    }
    for (std::size_t b = 0; b < n_bins; ++b)
      rows.push_back({p.label, edges[b], edges[b + 1], counts[b], std::nullopt});
  }
  return rows;
}

void write_histogram_csv(std::ostream& out, const RunManifest& manifest,
                         const HistogramSpec& spec, const std::vector<HistogramRow>& rows) {
  const bool with_rate = spec.metric == HistogramMetric::success_rate;
  out.precision(17);
  out << "# " << manifest_comment(manifest) << '\n';
  out << "group,bin_lo,bin_hi,count" << (with_rate ? ",rate" : "") << '\n';
  for (const HistogramRow& r : rows) {
    out << r.group << ',' << r.bin_lo << ',' << r.bin_hi << ',' << r.count;
    if (with_rate) out << ',' << r.rate.value_or(0.0);
    out << '\n';
  }
}

HistogramMetric parse_histogram_metric(const std::string& name) {
  if (name == "success_rate") return HistogramMetric::success_rate;
  if (name == "survival") return HistogramMetric::survival;
  throw UsageError("unknown histogram metric '" + name + "'");
}

}  // namespace rgt
