#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rgt/rng.hpp"

namespace rgt {

using ArmIndex = std::size_t;
using Round = std::int64_t;  // 1-based round number t

// One arm's economics. A won bet returns the $1 stake plus `net_payout`;
// a lost bet costs the $1 stake.
struct BetSpec {
  std::string label;
  double win_prob = 0.0;
  int net_payout = 1;

  bool operator==(const BetSpec&) const = default;
};

// Replaces an arm's win probability for rounds from_round..to_round
// (both inclusive).
struct ScheduleOverride {
  Round from_round = 1;
  Round to_round = 1;
  std::string arm_label;
  double win_prob = 0.0;

  bool operator==(const ScheduleOverride&) const = default;
};

struct RoundOutcome {
  Round round = 0;
  ArmIndex arm = 0;
  bool won = false;
  int net_reward = 0;

  bool operator==(const RoundOutcome&) const = default;
};

// Immutable set of arms plus a time-indexed probability schedule. Validated
// on construction; throws ConfigError naming the offending field.
class WheelModel {
 public:
  WheelModel(std::vector<BetSpec> bets, std::vector<ScheduleOverride> schedule = {});

  std::size_t arm_count() const noexcept { return bets_.size(); }
  const std::vector<BetSpec>& bets() const noexcept { return bets_; }
  const BetSpec& bet(ArmIndex arm) const;
  const std::vector<ScheduleOverride>& schedule() const noexcept { return schedule_; }

  // Throws UsageError if the label is unknown.
  ArmIndex arm_index(const std::string& label) const;

  std::vector<int> payouts() const;
  int max_payout() const;

  // Win probability of `arm` at round t (t >= 1).
  double theta_at(Round t, ArmIndex arm) const;

  bool operator==(const WheelModel& other) const {
    return bets_ == other.bets_ && schedule_ == other.schedule_;
  }

 private:
  struct ResolvedOverride {
    Round from;
    Round to;
    ArmIndex arm;
    double win_prob;
  };

  std::vector<BetSpec> bets_;
  std::vector<ScheduleOverride> schedule_;
  std::vector<ResolvedOverride> resolved_;
};

// Resolves one round: the chosen arm wins with probability theta_at(t, arm).
// Consumes exactly one uniform draw.
RoundOutcome spin(const WheelModel& model, Round t, ArmIndex arm, RandomSource& rng);

// win_prob * (net_payout + 1) - 1, in dollars per $1 bet.
double expected_value(const BetSpec& spec);

// How the zero bet's "36" in the classic payout table is read. net35 treats it
// as the gross return including the stake (all fair-wheel EVs equal -1/37);
// net36 treats it as the net gain.
enum class ZeroPayoutConvention { net35, net36 };

enum class WheelPreset { fair, skewed, nonstationary };

WheelModel standard_wheel(WheelPreset preset,
                          ZeroPayoutConvention convention = ZeroPayoutConvention::net35);

// {"fair", "skewed", "nonstationary"} -> preset wheel.
std::map<std::string, WheelModel> standard_wheels(
    ZeroPayoutConvention convention = ZeroPayoutConvention::net35);

WheelPreset parse_wheel_preset(const std::string& name);
ZeroPayoutConvention parse_zero_payout_convention(const std::string& name);
std::string to_string(WheelPreset preset);
std::string to_string(ZeroPayoutConvention convention);

}  // namespace rgt
