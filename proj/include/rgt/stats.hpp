#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rgt::stats {

struct SampleGroup {
  std::string label;
  std::vector<double> values;
};

struct AnovaResult {
  double f_statistic = 0.0;
  int df_between = 0;
  long df_within = 0;
  double p_value = 1.0;
  // Set when the within-group variance vanishes while the between-group
  // variance does not (F is infinite, p = 0).
  bool degenerate = false;
};

// Continued-fraction limits for regularized_incomplete_beta.
inline constexpr int kBetaMaxIterations = 300;
inline constexpr double kBetaTolerance = 1e-14;

// I_x(a, b). Throws UsageError for x outside [0,1] or non-positive a/b and
// NumericError if the continued fraction does not converge.
double regularized_incomplete_beta(double x, double a, double b);

// CDF and survival function of the F(d1, d2) distribution.
double f_cdf(double f, double d1, double d2);
double f_sf(double f, double d1, double d2);

// One-way ANOVA across all groups. Requires >= 2 nonempty groups and N > k.
AnovaResult one_way_anova(std::span<const SampleGroup> groups);

// Two-group ANOVA of each treatment against the control, in input order.
std::vector<std::pair<std::string, AnovaResult>> pairwise_vs_control(
    const SampleGroup& control, std::span<const SampleGroup> treatments);

}  // namespace rgt::stats
