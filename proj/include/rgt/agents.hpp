#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rgt/rng.hpp"
#include "rgt/wheel.hpp"

namespace rgt {

enum class PolicyKind { random, epsilon_greedy, thompson, td };
enum class TdVariant { td0, td1 };
enum class ThompsonObjective { expected_reward, win_prob };

// Immutable description of a decision policy. Only the parameters relevant to
// `kind` are meaningful; use the factories to build valid specs.
struct PolicySpec {
  PolicyKind kind = PolicyKind::random;
  double epsilon = 0.1;          // epsilon_greedy
  TdVariant td_variant = TdVariant::td0;  // td
  double learning_rate = 0.1;    // td0
  ThompsonObjective ts_objective = ThompsonObjective::expected_reward;  // thompson

  static PolicySpec random();
  static PolicySpec epsilon_greedy(double epsilon = 0.1);
  static PolicySpec thompson(ThompsonObjective objective = ThompsonObjective::expected_reward);
  static PolicySpec td0(double learning_rate = 0.1);
  static PolicySpec td1();

  // Throws UsageError on out-of-range parameters.
  void validate() const;

  // "random", "epsilon_greedy", "thompson", "td0" or "td1".
  std::string default_label() const;

  // Equal when kind and every relevant parameter match.
  bool same_parameters(const PolicySpec& other) const;
};

struct ArmStats {
  std::int64_t pulls = 0;       // N_i
  std::int64_t wins = 0;        // S_i
  std::int64_t reward_sum = 0;  // sum of net rewards observed on this arm

  void record(const RoundOutcome& outcome) {
    ++pulls;
    if (outcome.won) ++wins;
    reward_sum += outcome.net_reward;
  }

  // Empirical mean reward; 0 for an unpulled arm.
  double mean_reward() const {
    return pulls > 0 ? static_cast<double>(reward_sum) / static_cast<double>(pulls) : 0.0;
  }

  bool operator==(const ArmStats&) const = default;
};

struct RandomState {
  std::size_t arms = 1;
  bool operator==(const RandomState&) const = default;
};

struct EpsilonGreedyState {
  std::vector<ArmStats> arms;
  bool operator==(const EpsilonGreedyState&) const = default;
};

struct ThompsonState {
  std::vector<double> prior_alpha;  // init 1
  std::vector<double> prior_beta;   // init 1
  std::vector<ArmStats> arms;

  explicit ThompsonState(std::size_t k = 1)
      : prior_alpha(k, 1.0), prior_beta(k, 1.0), arms(k) {}

  bool operator==(const ThompsonState&) const = default;
};

struct TdState {
  std::vector<double> q_values;  // init 0
  std::vector<ArmStats> arms;

  explicit TdState(std::size_t k = 1) : q_values(k, 0.0), arms(k) {}

  bool operator==(const TdState&) const = default;
};

using AgentState = std::variant<RandomState, EpsilonGreedyState, ThompsonState, TdState>;

AgentState make_state(const PolicySpec& policy, std::size_t arm_count);

ArmIndex select_random(std::size_t arm_count, RandomSource& rng);

// With probability epsilon a uniform arm (greedy arm included), otherwise the
// arm with the highest empirical mean reward. Ties are broken uniformly.
ArmIndex select_epsilon_greedy(std::span<const ArmStats> arms, double epsilon,
                               RandomSource& rng);

// (alpha + wins) / (alpha + beta + pulls)
double thompson_posterior_mean(double alpha, double beta, std::int64_t wins,
                               std::int64_t pulls);

// Samples every arm's win probability from its Beta posterior and returns
// the argmax of the objective. Exact ties go to the lowest index.
ArmIndex select_thompson(const ThompsonState& state, std::span<const int> payouts,
                         ThompsonObjective objective, RandomSource& rng);

// Argmax of the Q-values, ties broken uniformly.
ArmIndex select_td(const TdState& state, RandomSource& rng);

// Dispatches to the select_* function matching `policy`. Never mutates state.
ArmIndex select(const PolicySpec& policy, const AgentState& state,
                std::span<const int> payouts, RandomSource& rng);

// Folds one observed outcome into the state. Never draws randomness.
void update(const PolicySpec& policy, AgentState& state, const RoundOutcome& outcome);

std::string to_string(PolicyKind kind);
std::string to_string(TdVariant variant);
std::string to_string(ThompsonObjective objective);
PolicyKind parse_policy_kind(const std::string& name);
TdVariant parse_td_variant(const std::string& name);
ThompsonObjective parse_thompson_objective(const std::string& name);

}  // namespace rgt
