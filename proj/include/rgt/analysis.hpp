#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rgt::analysis {

// P_k: probability that arm k yields the highest realized payout in one joint
// realization of independent win/loss draws, given that at least one arm wins.
// Aligned with the input arm order.
using TopRewardDistribution = std::vector<double>;

inline constexpr std::size_t kMaxBruteForceArms = 20;

//   P_k = theta_k / (1 - prod_j (1 - theta_j)) * prod_{i : r_i > r_k} (1 - theta_i)
// Requires thetas in (0,1), pairwise distinct payouts, matching lengths.
TopRewardDistribution top_reward_closed_form(std::span<const double> thetas,
                                             std::span<const int> payouts);

// Enumerates all 2^K joint outcomes. Same preconditions, plus K <= 20.
TopRewardDistribution top_reward_brute_force(std::span<const double> thetas,
                                             std::span<const int> payouts);

double max_abs_difference(std::span<const double> a, std::span<const double> b);

}  // namespace rgt::analysis
