#include "rgt/wheel.hpp"

#include <algorithm>
#include <set>

#include "rgt/error.hpp"

namespace rgt {
namespace {

std::string bet_field(std::size_t i, const char* name) {
  return "bets[" + std::to_string(i) + "]." + name;
}

std::string schedule_field(std::size_t i, const char* name) {
  return "schedule[" + std::to_string(i) + "]." + name;
}

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

WheelModel::WheelModel(std::vector<BetSpec> bets, std::vector<ScheduleOverride> schedule)
    : bets_(std::move(bets)), schedule_(std::move(schedule)) {
  if (bets_.empty()) throw ConfigError("bets", "at least one bet is required");

  std::set<std::string> labels;
  std::set<int> payouts;
  for (std::size_t i = 0; i < bets_.size(); ++i) {
    const BetSpec& b = bets_[i];
    if (b.label.empty()) throw ConfigError(bet_field(i, "label"), "must be nonempty");
    if (!labels.insert(b.label).second)
      throw ConfigError(bet_field(i, "label"), "duplicate label '" + b.label + "'");
    if (!open_unit(b.win_prob))
      throw ConfigError(bet_field(i, "win_prob"), "must lie strictly between 0 and 1");
    if (b.net_payout < 1) throw ConfigError(bet_field(i, "net_payout"), "must be >= 1");
    if (!payouts.insert(b.net_payout).second)
      throw ConfigError(bet_field(i, "net_payout"),
                        "duplicate payout " + std::to_string(b.net_payout));
  }

  for (std::size_t i = 0; i < schedule_.size(); ++i) {
    const ScheduleOverride& o = schedule_[i];
    if (o.from_round < 1) throw ConfigError(schedule_field(i, "from"), "must be >= 1");
    if (o.to_round < o.from_round)
      throw ConfigError(schedule_field(i, "to"), "must be >= from");
    if (!open_unit(o.win_prob))
      throw ConfigError(schedule_field(i, "win_prob"), "must lie strictly between 0 and 1");
    const auto it = std::find_if(bets_.begin(), bets_.end(),
                                 [&](const BetSpec& b) { return b.label == o.arm_label; });
    if (it == bets_.end())
      throw ConfigError(schedule_field(i, "arm"), "unknown arm '" + o.arm_label + "'");
    const auto arm = static_cast<ArmIndex>(it - bets_.begin());
    for (const ResolvedOverride& prev : resolved_) {
      if (prev.arm == arm && o.from_round <= prev.to && prev.from <= o.to_round)
        throw ConfigError(schedule_field(i, "from"),
                          "overlaps an earlier override for arm '" + o.arm_label + "'");
    }
    resolved_.push_back({o.from_round, o.to_round, arm, o.win_prob});
  }
}

const BetSpec& WheelModel::bet(ArmIndex arm) const {
  if (arm >= bets_.size())
    throw UsageError("arm index " + std::to_string(arm) + " out of range (K=" +
                     std::to_string(bets_.size()) + ")");
  return bets_[arm];
}

ArmIndex WheelModel::arm_index(const std::string& label) const {
  for (std::size_t i = 0; i < bets_.size(); ++i)
    if (bets_[i].label == label) return i;
  throw UsageError("unknown arm label '" + label + "'");
}

std::vector<int> WheelModel::payouts() const {
  std::vector<int> out;
  out.reserve(bets_.size());
  for (const BetSpec& b : bets_) out.push_back(b.net_payout);
  return out;
}

int WheelModel::max_payout() const {
  int best = bets_.front().net_payout;
  for (const BetSpec& b : bets_) best = std::max(best, b.net_payout);
  return best;
}

double WheelModel::theta_at(Round t, ArmIndex arm) const {
  const BetSpec& b = bet(arm);
  if (t < 1) throw UsageError("round must be >= 1, got " + std::to_string(t));
  for (const ResolvedOverride& o : resolved_)
    if (o.arm == arm && o.from <= t && t <= o.to) return o.win_prob;
  return b.win_prob;
}

RoundOutcome spin(const WheelModel& model, Round t, ArmIndex arm, RandomSource& rng) {
  const double theta = model.theta_at(t, arm);
  const bool won = rng.uniform01() < theta;
  return RoundOutcome{t, arm, won, won ? model.bets()[arm].net_payout : -1};
}

double expected_value(const BetSpec& spec) {
  return spec.win_prob * (spec.net_payout + 1) - 1.0;
}

WheelModel standard_wheel(WheelPreset preset, ZeroPayoutConvention convention) {
  const int zero_payout = convention == ZeroPayoutConvention::net35 ? 35 : 36;
  const double zero_prob = preset == WheelPreset::skewed ? 2.0 / 37.0 : 1.0 / 37.0;
  std::vector<BetSpec> bets{
      {"zero", zero_prob, zero_payout},
      {"corner", 4.0 / 37.0, 8},
      {"even", 18.0 / 37.0, 1},
  };
  std::vector<ScheduleOverride> schedule;
  if (preset == WheelPreset::nonstationary) schedule.push_back({100, 200, "zero", 2.0 / 37.0});
  return WheelModel(std::move(bets), std::move(schedule));
}

std::map<std::string, WheelModel> standard_wheels(ZeroPayoutConvention convention) {
  std::map<std::string, WheelModel> out;
  for (WheelPreset p : {WheelPreset::fair, WheelPreset::skewed, WheelPreset::nonstationary})
    out.emplace(to_string(p), standard_wheel(p, convention));
  return out;
}

WheelPreset parse_wheel_preset(const std::string& name) {
  if (name == "fair") return WheelPreset::fair;
  if (name == "skewed") return WheelPreset::skewed;
  if (name == "nonstationary") return WheelPreset::nonstationary;
  throw UsageError("unknown wheel preset '" + name + "'");
}

ZeroPayoutConvention parse_zero_payout_convention(const std::string& name) {
  if (name == "net35") return ZeroPayoutConvention::net35;
  if (name == "net36") return ZeroPayoutConvention::net36;
  throw UsageError("unknown zero payout convention '" + name + "'");
}

std::string to_string(WheelPreset preset) {
  switch (preset) {
    case WheelPreset::fair: return "fair";
    case WheelPreset::skewed: return "skewed";
    case WheelPreset::nonstationary: return "nonstationary";
  }
  return "?";
}

std::string to_string(ZeroPayoutConvention convention) {
  return convention == ZeroPayoutConvention::net35 ? "net35" : "net36";
}

}  // namespace rgt
