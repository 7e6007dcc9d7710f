#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgt/agents.hpp"
#include "rgt/rng.hpp"
#include "rgt/wheel.hpp"

namespace rgt {

enum class SessionMode { horizon, bankruptcy };

// Which final balances count as a successful horizon-mode session.
enum class SuccessRule { nonnegative, positive };

struct SessionConfig {
  SessionMode mode = SessionMode::horizon;
  Round horizon = 50;                     // horizon mode
  std::int64_t initial_bankroll = 100;    // bankruptcy mode
  Round round_cap = 1'000'000;            // bankruptcy mode

  static SessionConfig finite_horizon(Round horizon);
  static SessionConfig until_bankrupt(std::int64_t bankroll = 100, Round round_cap = 1'000'000);

  void validate() const;  // throws ConfigError
  bool operator==(const SessionConfig&) const = default;
};

// Inclusive round range over which arm selections are tallied separately.
struct RoundWindow {
  Round from_round = 1;
  Round to_round = 1;
  bool operator==(const RoundWindow&) const = default;
};

struct SessionOptions {
  bool trace = false;
  std::vector<RoundWindow> windows;
};

struct SessionResult {
  SessionMode mode = SessionMode::horizon;
  Round rounds_played = 0;
  std::int64_t final_balance = 0;
  bool bankrupt = false;
  bool capped = false;
  std::vector<std::int64_t> arm_pulls;                 // per arm, whole session
  std::vector<std::vector<std::int64_t>> window_pulls;  // [window][arm]
  std::optional<std::vector<RoundOutcome>> trace;

  bool operator==(const SessionResult&) const = default;
};

// Runs t = 1, 2, ... : select, spin, update. Horizon mode starts at balance 0
// and stops after `horizon` rounds. Bankruptcy mode starts at the bankroll and
// stops the first time the balance is <= 0, or at the round cap.
SessionResult run_session(const WheelModel& wheel, const PolicySpec& policy,
                          const SessionConfig& config, RandomSource& wheel_rng,
                          RandomSource& agent_rng, const SessionOptions& options = {});

// Same, with the two random streams derived from `seed`: the wheel stream is
// seeded with splitmix64(seed), the agent stream with
// splitmix64(splitmix64(seed)).
SessionResult run_session(const WheelModel& wheel, const PolicySpec& policy,
                          const SessionConfig& config, std::uint64_t seed,
                          const SessionOptions& options = {});

struct NamedPolicy {
  std::string label;
  PolicySpec spec;
};

struct ExperimentConfig {
  WheelModel wheel = standard_wheel(WheelPreset::fair);
  SessionConfig session;
  std::vector<NamedPolicy> policies;
  std::int64_t sessions_per_policy = 10'000;
  std::uint64_t base_seed = 0;
  bool trace = false;
  SuccessRule success_rule = SuccessRule::nonnegative;
  std::vector<RoundWindow> windows;

  // Throws ConfigError with the offending field path.
  void validate() const;
};

struct WindowFrequencies {
  RoundWindow window;
  std::int64_t rounds = 0;          // rounds played inside the window, all sessions
  std::vector<double> frequencies;  // per arm; zeros if rounds == 0
};

struct PolicySummary {
  std::int64_t sessions = 0;
  double mean_final_balance = 0.0;
  // Horizon mode only.
  std::optional<std::int64_t> success_count;
  std::optional<double> success_rate;
  // Bankruptcy mode only.
  std::optional<double> survival_mean;
  std::optional<double> survival_median;
  std::optional<std::int64_t> capped_count;
  std::vector<double> arm_frequencies;
  std::vector<WindowFrequencies> windows;
};

struct PolicyResult {
  std::string label;
  PolicySpec spec;
  std::vector<SessionResult> sessions;
  PolicySummary summary;
};

struct ExperimentResult {
  SessionMode mode = SessionMode::horizon;
  std::vector<PolicyResult> policies;

  const PolicyResult* find(const std::string& label) const;
};

// Session j of policy p uses seed mix_seed(base_seed, p, j). The result does
// not depend on `threads` (0 means hardware concurrency).
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0);

PolicySummary summarize(std::span<const SessionResult> sessions, std::size_t arm_count,
                        std::span<const RoundWindow> windows,
                        SuccessRule rule = SuccessRule::nonnegative);

bool is_success(const SessionResult& result, SuccessRule rule = SuccessRule::nonnegative);

// Fraction of successful horizon-mode sessions. Throws UsageError on empty
// input or bankruptcy-mode sessions.
double success_rate(std::span<const SessionResult> results,
                    SuccessRule rule = SuccessRule::nonnegative);

// rounds_played of each bankruptcy-mode session (capped ones included).
// Throws UsageError on horizon-mode input.
std::vector<Round> survival_rounds(std::span<const SessionResult> results);

double median(std::vector<double> values);

std::string to_string(SessionMode mode);
std::string to_string(SuccessRule rule);
SessionMode parse_session_mode(const std::string& name);
SuccessRule parse_success_rule(const std::string& name);

}  // namespace rgt
