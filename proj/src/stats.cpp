#include "rgt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rgt/error.hpp"

#if defined(__GLIBC__)
extern "C" double lgamma_r(double, int*);
#else
#include <mutex>
#endif

namespace rgt::stats {
namespace {

constexpr double kTiny = 1e-300;

// std::lgamma writes the global signgam; keep it reentrant.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return lgamma_r(x, &sign);
#else
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  return std::lgamma(x);
#endif
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

// Modified Lentz evaluation of the continued fraction for I_x(a,b); converges
// quickly for x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    // even step
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    // odd step
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kBetaTolerance) return h;
  }
  throw NumericError("regularized_incomplete_beta: continued fraction did not converge in " +
                     std::to_string(kBetaMaxIterations) + " iterations (x=" + std::to_string(x) +
                     ", a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw UsageError("regularized_incomplete_beta: a and b must be positive and finite");
  if (!(x >= 0.0 && x <= 1.0))
    throw UsageError("regularized_incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_incomplete_beta(1.0 - x, b, a);

  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b)) / a;
  const double value = front * beta_continued_fraction(x, a, b);
  if (!std::isfinite(value))
    throw NumericError("regularized_incomplete_beta: non-finite result");
  return std::clamp(value, 0.0, 1.0);
}

double f_cdf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw UsageError("f_cdf: degrees of freedom must be positive");
  if (!(f >= 0.0)) throw UsageError("f_cdf: f must be >= 0");
  if (std::isinf(f)) return 1.0;
  return regularized_incomplete_beta(d1 * f / (d1 * f + d2), d1 / 2.0, d2 / 2.0);
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw UsageError("f_sf: degrees of freedom must be positive");
  if (!(f >= 0.0)) throw UsageError("f_sf: f must be >= 0");
  if (std::isinf(f)) return 0.0;
  // Evaluated on the complementary argument so small p-values keep their
  // relative precision.
  return regularized_incomplete_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
}

AnovaResult one_way_anova(std::span<const SampleGroup> groups) {
  if (groups.size() < 2) throw UsageError("one_way_anova: need at least two groups");
  std::size_t n_total = 0;
  double grand_sum = 0.0;
  for (const SampleGroup& g : groups) {
    if (g.values.empty())
      throw UsageError("one_way_anova: group '" + g.label + "' is empty");
    n_total += g.values.size();
    for (double v : g.values) grand_sum += v;
  }
  const std::size_t k = groups.size();
  if (n_total <= k) throw UsageError("one_way_anova: need more samples than groups");

  const double grand_mean = grand_sum / static_cast<double>(n_total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const SampleGroup& g : groups) {
    double sum = 0.0;
    for (double v : g.values) sum += v;
    const double mean = sum / static_cast<double>(g.values.size());
    ssb += static_cast<double>(g.values.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : g.values) ssw += (v - mean) * (v - mean);
  }

  AnovaResult r;
  r.df_between = static_cast<int>(k - 1);
  r.df_within = static_cast<long>(n_total - k);

  // Rounding residue in the sums of squares is treated as exact zero.
  const double sst = ssb + ssw;
  constexpr double kRelZero = 1e-14;
  if (sst == 0.0 || ssb <= kRelZero * sst) {
    r.f_statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (ssw <= kRelZero * sst) {
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.degenerate = true;
    return r;
  }
  const double d1 = r.df_between;
  const double d2 = static_cast<double>(r.df_within);
  r.f_statistic = (ssb / d1) / (ssw / d2);
  r.p_value = f_sf(r.f_statistic, d1, d2);
  return r;
}

std::vector<std::pair<std::string, AnovaResult>> pairwise_vs_control(
    const SampleGroup& control, std::span<const SampleGroup> treatments) {
  std::vector<std::pair<std::string, AnovaResult>> out;
  out.reserve(treatments.size());
  for (const SampleGroup& t : treatments) {
    const SampleGroup pair[] = {control, t};
    out.emplace_back(t.label, one_way_anova(pair));
  }
  return out;
}

}  // namespace rgt::stats
