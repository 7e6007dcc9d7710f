#include "rgt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "rgt/error.hpp"

namespace rgt::analysis {
namespace {

void check_inputs(std::span<const double> thetas, std::span<const int> payouts) {
  if (thetas.empty()) throw UsageError("top_reward: need at least one arm");
  if (thetas.size() != payouts.size())
    throw UsageError("top_reward: theta and payout lists differ in length");
  for (double t : thetas)
    if (!(t > 0.0 && t < 1.0)) throw UsageError("top_reward: every theta must lie in (0, 1)");
  std::set<int> seen;
  for (int r : payouts) {
    if (r < 1) throw UsageError("top_reward: payouts must be >= 1");
    if (!seen.insert(r).second)
      throw UsageError("top_reward: payouts must be pairwise distinct (duplicate " +
                       std::to_string(r) + ")");
  }
}

}  // namespace

TopRewardDistribution top_reward_closed_form(std::span<const double> thetas,
                                             std::span<const int> payouts) {
  check_inputs(thetas, payouts);
  const std::size_t k = thetas.size();
  double all_lose = 1.0;
  for (double t : thetas) all_lose *= 1.0 - t;
  const double at_least_one_win = 1.0 - all_lose;

  TopRewardDistribution out(k);
  for (std::size_t arm = 0; arm < k; ++arm) {
    double higher_lose = 1.0;
    for (std::size_t i = 0; i < k; ++i)
      if (payouts[i] > payouts[arm]) higher_lose *= 1.0 - thetas[i];
    out[arm] = thetas[arm] / at_least_one_win * higher_lose;
  }
  return out;
}

TopRewardDistribution top_reward_brute_force(std::span<const double> thetas,
                                             std::span<const int> payouts) {
  check_inputs(thetas, payouts);
  const std::size_t k = thetas.size();
  if (k > kMaxBruteForceArms)
    throw UsageError("top_reward_brute_force: at most " + std::to_string(kMaxBruteForceArms) +
                     " arms");

  TopRewardDistribution mass(k, 0.0);
  double win_mass = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << k;
  // Bit i of `mask` set means arm i wins in this joint realization.
  for (std::uint64_t mask = 1; mask < outcomes; ++mask) {
    double p = 1.0;
    std::size_t top = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        p *= thetas[i];
        if (top == k || payouts[i] > payouts[top]) top = i;
      } else {
        p *= 1.0 - thetas[i];
      }
    }
    mass[top] += p;
    win_mass += p;
  }
  for (double& m : mass) m /= win_mass;
  return mass;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("max_abs_difference: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace rgt::analysis
