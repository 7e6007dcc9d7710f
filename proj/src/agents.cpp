#include "rgt/agents.hpp"

#include <limits>

#include "rgt/error.hpp"

namespace rgt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Argmax over `score(i)` for i < n with uniform random tie-breaking. Draws from
// `rng` only when more than one arm ties for the maximum.
template <class Score>
ArmIndex argmax_uniform_ties(std::size_t n, Score score, RandomSource& rng) {
  double best = -std::numeric_limits<double>::infinity();
  ArmIndex first = 0;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = score(i);
    if (v > best) {
      best = v;
      first = i;
      ties = 1;
    } else if (v == best) {
      ++ties;
    }
  }
  if (ties <= 1) return first;
  std::size_t pick = rng.uniform_index(ties);
  for (std::size_t i = first; i < n; ++i) {
    if (score(i) == best && pick-- == 0) return i;
  }
  return first;
}

}  // namespace

PolicySpec PolicySpec::random() { return PolicySpec{}; }

PolicySpec PolicySpec::epsilon_greedy(double epsilon) {
  PolicySpec p;
  p.kind = PolicyKind::epsilon_greedy;
  p.epsilon = epsilon;
  return p;
}

PolicySpec PolicySpec::thompson(ThompsonObjective objective) {
  PolicySpec p;
  p.kind = PolicyKind::thompson;
  p.ts_objective = objective;
  return p;
}

PolicySpec PolicySpec::td0(double learning_rate) {
  PolicySpec p;
  p.kind = PolicyKind::td;
  p.td_variant = TdVariant::td0;
  p.learning_rate = learning_rate;
  return p;
}

PolicySpec PolicySpec::td1() {
  PolicySpec p;
  p.kind = PolicyKind::td;
  p.td_variant = TdVariant::td1;
  return p;
}

void PolicySpec::validate() const {
  if (kind == PolicyKind::epsilon_greedy && !(epsilon >= 0.0 && epsilon <= 1.0))
    throw ConfigError("epsilon", "must lie in [0, 1]");
  if (kind == PolicyKind::td && td_variant == TdVariant::td0 &&
      !(learning_rate > 0.0 && learning_rate <= 1.0))
    throw ConfigError("learning_rate", "must lie in (0, 1]");
}

std::string PolicySpec::default_label() const {
  if (kind == PolicyKind::td) return to_string(td_variant);
  return to_string(kind);
}

bool PolicySpec::same_parameters(const PolicySpec& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case PolicyKind::random: return true;
    case PolicyKind::epsilon_greedy: return epsilon == other.epsilon;
    case PolicyKind::thompson: return ts_objective == other.ts_objective;
    case PolicyKind::td:
      if (td_variant != other.td_variant) return false;
      return td_variant == TdVariant::td1 || learning_rate == other.learning_rate;
  }
  return false;
}

AgentState make_state(const PolicySpec& policy, std::size_t arm_count) {
  if (arm_count == 0) throw UsageError("agent needs at least one arm");
  switch (policy.kind) {
    case PolicyKind::random: return RandomState{arm_count};
    case PolicyKind::epsilon_greedy: return EpsilonGreedyState{std::vector<ArmStats>(arm_count)};
    case PolicyKind::thompson: return ThompsonState(arm_count);
    case PolicyKind::td: return TdState(arm_count);
  }
  throw UsageError("unknown policy kind");
}

ArmIndex select_random(std::size_t arm_count, RandomSource& rng) {
  if (arm_count == 0) throw UsageError("select_random: no arms");
  return rng.uniform_index(arm_count);
}

ArmIndex select_epsilon_greedy(std::span<const ArmStats> arms, double epsilon,
                               RandomSource& rng) {
  if (arms.empty()) throw UsageError("select_epsilon_greedy: no arms");
  if (rng.uniform01() < epsilon) return rng.uniform_index(arms.size());
  return argmax_uniform_ties(
      arms.size(), [&](std::size_t i) { return arms[i].mean_reward(); }, rng);
}

double thompson_posterior_mean(double alpha, double beta, std::int64_t wins,
                               std::int64_t pulls) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw UsageError("prior parameters must be positive");
  if (wins < 0 || pulls < wins) throw UsageError("need 0 <= wins <= pulls");
  return (alpha + static_cast<double>(wins)) /
         (alpha + beta + static_cast<double>(pulls));
}

ArmIndex select_thompson(const ThompsonState& state, std::span<const int> payouts,
                         ThompsonObjective objective, RandomSource& rng) {
  const std::size_t k = state.arms.size();
  if (k == 0) throw UsageError("select_thompson: no arms");
  if (payouts.size() != k) throw UsageError("select_thompson: payout count mismatch");
  if (k == 1) return 0;

  ArmIndex best_arm = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const ArmStats& s = state.arms[i];
    const double a = state.prior_alpha[i] + static_cast<double>(s.wins);
    const double b = state.prior_beta[i] + static_cast<double>(s.pulls - s.wins);
    const double theta = rng.beta(a, b);
    const double score = objective == ThompsonObjective::expected_reward
                             ? theta * (payouts[i] + 1) - 1.0
                             : theta;
    if (score > best) {
      best = score;
      best_arm = i;
    }
  }
  return best_arm;
}

ArmIndex select_td(const TdState& state, RandomSource& rng) {
  if (state.q_values.empty()) throw UsageError("select_td: no arms");
  return argmax_uniform_ties(
      state.q_values.size(), [&](std::size_t i) { return state.q_values[i]; }, rng);
}

ArmIndex select(const PolicySpec& policy, const AgentState& state,
                std::span<const int> payouts, RandomSource& rng) {
  return std::visit(
      Overloaded{
          [&](const RandomState& s) { return select_random(s.arms, rng); },
          [&](const EpsilonGreedyState& s) {
            return select_epsilon_greedy(s.arms, policy.epsilon, rng);
          },
          [&](const ThompsonState& s) {
            return select_thompson(s, payouts, policy.ts_objective, rng);
          },
          [&](const TdState& s) { return select_td(s, rng); },
      },
      state);
}

void update(const PolicySpec& policy, AgentState& state, const RoundOutcome& outcome) {
  std::visit(
      Overloaded{
          [&](RandomState&) {},
          [&](EpsilonGreedyState& s) { s.arms.at(outcome.arm).record(outcome); },
          [&](ThompsonState& s) { s.arms.at(outcome.arm).record(outcome); },
          [&](TdState& s) {
            ArmStats& arm = s.arms.at(outcome.arm);
            arm.record(outcome);
            double& q = s.q_values[outcome.arm];
            if (policy.td_variant == TdVariant::td0) {
              q += policy.learning_rate * (outcome.net_reward - q);
            } else {
              q = static_cast<double>(arm.reward_sum) / static_cast<double>(arm.pulls);
            }
          },
      },
      state);
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::random: return "random";
    case PolicyKind::epsilon_greedy: return "epsilon_greedy";
    case PolicyKind::thompson: return "thompson";
    case PolicyKind::td: return "td";
  }
  return "?";
}

std::string to_string(TdVariant variant) { return variant == TdVariant::td0 ? "td0" : "td1"; }

std::string to_string(ThompsonObjective objective) {
  return objective == ThompsonObjective::expected_reward ? "expected_reward" : "win_prob";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "random") return PolicyKind::random;
  if (name == "epsilon_greedy") return PolicyKind::epsilon_greedy;
  if (name == "thompson") return PolicyKind::thompson;
  if (name == "td") return PolicyKind::td;
  throw UsageError("unknown policy kind '" + name + "'");
}

TdVariant parse_td_variant(const std::string& name) {
  if (name == "td0") return TdVariant::td0;
  if (name == "td1") return TdVariant::td1;
  throw UsageError("unknown lambda_variant '" + name + "'");
}

ThompsonObjective parse_thompson_objective(const std::string& name) {
  if (name == "expected_reward") return ThompsonObjective::expected_reward;
  if (name == "win_prob") return ThompsonObjective::win_prob;
  throw UsageError("unknown ts_objective '" + name + "'");
}

}  // namespace rgt
