#include "rgt/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rgt/error.hpp"

namespace rgt {

SessionConfig SessionConfig::finite_horizon(Round horizon) {
  SessionConfig c;
  c.mode = SessionMode::horizon;
  c.horizon = horizon;
  return c;
}

SessionConfig SessionConfig::until_bankrupt(std::int64_t bankroll, Round round_cap) {
  SessionConfig c;
  c.mode = SessionMode::bankruptcy;
  c.initial_bankroll = bankroll;
  c.round_cap = round_cap;
  return c;
}

void SessionConfig::validate() const {
  if (mode == SessionMode::horizon) {
    if (horizon < 1) throw ConfigError("session.horizon", "must be >= 1");
  } else {
    if (initial_bankroll < 1) throw ConfigError("session.initial_bankroll", "must be >= 1");
    if (round_cap < 1) throw ConfigError("session.round_cap", "must be >= 1");
  }
}

SessionResult run_session(const WheelModel& wheel, const PolicySpec& policy,
                          const SessionConfig& config, RandomSource& wheel_rng,
                          RandomSource& agent_rng, const SessionOptions& options) {
  config.validate();
  policy.validate();

  const std::size_t k = wheel.arm_count();
  const std::vector<int> payouts = wheel.payouts();
  AgentState state = make_state(policy, k);

  SessionResult result;
  result.mode = config.mode;
  result.arm_pulls.assign(k, 0);
  result.window_pulls.assign(options.windows.size(), std::vector<std::int64_t>(k, 0));
  if (options.trace) result.trace.emplace();

  const bool horizon_mode = config.mode == SessionMode::horizon;
  std::int64_t balance = horizon_mode ? 0 : config.initial_bankroll;
  const Round last = horizon_mode ? config.horizon : config.round_cap;

  for (Round t = 1; t <= last; ++t) {
    const ArmIndex arm = select(policy, state, payouts, agent_rng);
    const RoundOutcome outcome = spin(wheel, t, arm, wheel_rng);
    update(policy, state, outcome);
    balance += outcome.net_reward;

    result.rounds_played = t;
    ++result.arm_pulls[arm];
    for (std::size_t w = 0; w < options.windows.size(); ++w) {
      const RoundWindow& win = options.windows[w];
      if (win.from_round <= t && t <= win.to_round) ++result.window_pulls[w][arm];
    }
    if (result.trace) result.trace->push_back(outcome);

    if (!horizon_mode && balance <= 0) {
      result.bankrupt = true;
      break;
    }
  }
  if (!horizon_mode && !result.bankrupt) result.capped = true;
  result.final_balance = balance;
  return result;
}

SessionResult run_session(const WheelModel& wheel, const PolicySpec& policy,
                          const SessionConfig& config, std::uint64_t seed,
                          const SessionOptions& options) {
  Mt64Source wheel_rng(splitmix64(seed));
  Mt64Source agent_rng(splitmix64(splitmix64(seed)));
  return run_session(wheel, policy, config, wheel_rng, agent_rng, options);
}

void ExperimentConfig::validate() const {
  session.validate();
  if (policies.empty()) throw ConfigError("policies", "at least one policy is required");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const std::string prefix = "policies[" + std::to_string(i) + "]";
    const NamedPolicy& p = policies[i];
    if (p.label.empty()) throw ConfigError(prefix + ".label", "must be nonempty");
    try {
      p.spec.validate();
    } catch (const ConfigError& e) {
      throw e.prefixed(prefix);
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (policies[j].label == p.label)
        throw ConfigError(prefix + ".label", "duplicate label '" + p.label + "'");
      if (policies[j].spec.same_parameters(p.spec))
        throw ConfigError(prefix, "duplicates the parameters of policies[" +
                                      std::to_string(j) + "]");
    }
  }
  if (sessions_per_policy < 1) throw ConfigError("sessions_per_policy", "must be >= 1");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::string prefix = "selection_windows[" + std::to_string(i) + "]";
    if (windows[i].from_round < 1) throw ConfigError(prefix + ".from", "must be >= 1");
    if (windows[i].to_round < windows[i].from_round)
      throw ConfigError(prefix + ".to", "must be >= from");
  }
}

const PolicyResult* ExperimentResult::find(const std::string& label) const {
  for (const PolicyResult& p : policies)
    if (p.label == label) return &p;
  return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();

  const std::size_t n_policies = config.policies.size();
  const auto n_sessions = static_cast<std::size_t>(config.sessions_per_policy);
  const std::size_t total = n_policies * n_sessions;
  const SessionOptions options{config.trace, config.windows};

  // Slot i holds session (i % n_sessions) of policy (i / n_sessions), so the
  // output layout is independent of which worker finishes first.
  std::vector<SessionResult> slots(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const std::size_t p = i / n_sessions;
      const std::size_t j = i % n_sessions;
      slots[i] = run_session(config.wheel, config.policies[p].spec, config.session,
                             mix_seed(config.base_seed, p, j), options);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  result.mode = config.session.mode;
  result.policies.reserve(n_policies);
  for (std::size_t p = 0; p < n_policies; ++p) {
    PolicyResult pr;
    pr.label = config.policies[p].label;
    pr.spec = config.policies[p].spec;
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(p * n_sessions);
    pr.sessions.assign(std::make_move_iterator(first),
                       std::make_move_iterator(first + static_cast<std::ptrdiff_t>(n_sessions)));
    pr.summary = summarize(pr.sessions, config.wheel.arm_count(), config.windows,
                           config.success_rule);
    result.policies.push_back(std::move(pr));
  }
  return result;
}

PolicySummary summarize(std::span<const SessionResult> sessions, std::size_t arm_count,
                        std::span<const RoundWindow> windows, SuccessRule rule) {
  if (sessions.empty()) throw UsageError("summarize: no sessions");
  PolicySummary s;
  s.sessions = static_cast<std::int64_t>(sessions.size());

  std::int64_t balance_sum = 0;
  std::vector<std::int64_t> pulls(arm_count, 0);
  std::vector<std::vector<std::int64_t>> window_pulls(windows.size(),
                                                      std::vector<std::int64_t>(arm_count, 0));
  for (const SessionResult& r : sessions) {
    balance_sum += r.final_balance;
    for (std::size_t a = 0; a < arm_count && a < r.arm_pulls.size(); ++a) pulls[a] += r.arm_pulls[a];
    for (std::size_t w = 0; w < windows.size() && w < r.window_pulls.size(); ++w)
      for (std::size_t a = 0; a < arm_count && a < r.window_pulls[w].size(); ++a)
        window_pulls[w][a] += r.window_pulls[w][a];
  }
  s.mean_final_balance = static_cast<double>(balance_sum) / static_cast<double>(s.sessions);

  auto normalize = [arm_count](const std::vector<std::int64_t>& counts, std::int64_t& total) {
    total = 0;
    for (std::int64_t c : counts) total += c;
    std::vector<double> f(arm_count, 0.0);
    if (total > 0)
      for (std::size_t a = 0; a < arm_count; ++a)
        f[a] = static_cast<double>(counts[a]) / static_cast<double>(total);
    return f;
  };
  std::int64_t total_rounds = 0;
  s.arm_frequencies = normalize(pulls, total_rounds);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    WindowFrequencies wf;
    wf.window = windows[w];
    wf.frequencies = normalize(window_pulls[w], wf.rounds);
    s.windows.push_back(std::move(wf));
  }

  if (sessions.front().mode == SessionMode::horizon) {
    std::int64_t successes = 0;
    for (const SessionResult& r : sessions) successes += is_success(r, rule) ? 1 : 0;
    s.success_count = successes;
    s.success_rate = static_cast<double>(successes) / static_cast<double>(s.sessions);
  } else {
    const std::vector<Round> rounds = survival_rounds(sessions);
    std::vector<double> values(rounds.begin(), rounds.end());
    double sum = 0.0;
    std::int64_t capped = 0;
    for (const SessionResult& r : sessions) capped += r.capped ? 1 : 0;
    for (double v : values) sum += v;
    s.survival_mean = sum / static_cast<double>(values.size());
    s.survival_median = median(std::move(values));
    s.capped_count = capped;
  }
  return s;
}

bool is_success(const SessionResult& result, SuccessRule rule) {
  return rule == SuccessRule::nonnegative ? result.final_balance >= 0 : result.final_balance > 0;
}

double success_rate(std::span<const SessionResult> results, SuccessRule rule) {
  if (results.empty()) throw UsageError("success_rate: empty result list");
  std::size_t ok = 0;
  for (const SessionResult& r : results) {
    if (r.mode != SessionMode::horizon)
      throw UsageError("success_rate: requires horizon-mode sessions");
    if (is_success(r, rule)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(results.size());
}

std::vector<Round> survival_rounds(std::span<const SessionResult> results) {
  std::vector<Round> out;
  out.reserve(results.size());
  for (const SessionResult& r : results) {
    if (r.mode != SessionMode::bankruptcy)
      throw UsageError("survival_rounds: requires bankruptcy-mode sessions");
    out.push_back(r.rounds_played);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::string to_string(SessionMode mode) {
  return mode == SessionMode::horizon ? "horizon" : "bankruptcy";
}

std::string to_string(SuccessRule rule) {
  return rule == SuccessRule::nonnegative ? "nonnegative" : "positive";
}

SessionMode parse_session_mode(const std::string& name) {
  if (name == "horizon") return SessionMode::horizon;
  if (name == "bankruptcy") return SessionMode::bankruptcy;
  throw UsageError("unknown session mode '" + name + "'");
}

SuccessRule parse_success_rule(const std::string& name) {
  if (name == "nonnegative") return SuccessRule::nonnegative;
  if (name == "positive") return SuccessRule::positive;
  throw UsageError("unknown success rule '" + name + "'");
}

}  // namespace rgt
