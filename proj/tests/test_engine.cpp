#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles/scripted_rng.hpp"
#include "rgt/engine.hpp"
#include "rgt/error.hpp"

using namespace rgt;
using rgt::testing::ScriptedRng;

namespace {

SessionResult horizon_result(std::int64_t balance) {
  SessionResult r;
  r.mode = SessionMode::horizon;
  r.rounds_played = 10;
  r.final_balance = balance;
  return r;
}

ExperimentConfig small_config(SessionConfig session, std::int64_t sessions = 200) {
  ExperimentConfig c;
  c.wheel = standard_wheel(WheelPreset::fair);
  c.session = session;
  c.policies = {{"random", PolicySpec::random()},
                {"epsilon_greedy", PolicySpec::epsilon_greedy()},
                {"thompson", PolicySpec::thompson()},
                {"td0", PolicySpec::td0()},
                {"td1", PolicySpec::td1()}};
  c.sessions_per_policy = sessions;
  c.base_seed = 2024;
  return c;
}

}  // namespace

TEST_SUITE("engine.session") {
  TEST_CASE("forced losses over a 50-round horizon") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    ScriptedRng wheel = ScriptedRng::always_lose();
    Mt64Source agent(1);
    const SessionResult r = run_session(fair, PolicySpec::random(),
                                        SessionConfig::finite_horizon(50), wheel, agent);
    CHECK(r.rounds_played == 50);
    CHECK(r.final_balance == -50);
    CHECK_FALSE(r.bankrupt);
    CHECK_FALSE(r.capped);
  }

  TEST_CASE("forced losses from a bankroll of 3") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    ScriptedRng wheel = ScriptedRng::always_lose();
    Mt64Source agent(2);
    const SessionResult r = run_session(fair, PolicySpec::thompson(),
                                        SessionConfig::until_bankrupt(3), wheel, agent);
    CHECK(r.rounds_played == 3);
    CHECK(r.bankrupt);
    CHECK(r.final_balance == 0);
    CHECK(survival_rounds(std::vector{r}) == std::vector<Round>{3});
  }

  TEST_CASE("bankroll of 1 with an immediate loss survives one round") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    ScriptedRng wheel = ScriptedRng::always_lose();
    Mt64Source agent(3);
    const SessionResult r =
        run_session(fair, PolicySpec::td0(), SessionConfig::until_bankrupt(1), wheel, agent);
    CHECK(survival_rounds(std::vector{r}) == std::vector<Round>{1});
  }

  TEST_CASE("round cap is reported distinctly") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    ScriptedRng wheel = ScriptedRng::always_win();
    Mt64Source agent(4);
    const SessionResult r = run_session(fair, PolicySpec::random(),
                                        SessionConfig::until_bankrupt(10, 250), wheel, agent);
    CHECK(r.capped);
    CHECK_FALSE(r.bankrupt);
    CHECK(r.rounds_played == 250);
  }

  TEST_CASE("trace accounting and per-round invariants") {
    const WheelModel ns = standard_wheel(WheelPreset::nonstationary);
    for (const PolicySpec& p : {PolicySpec::random(), PolicySpec::epsilon_greedy(),
                                PolicySpec::thompson(), PolicySpec::td0(), PolicySpec::td1()}) {
      const SessionOptions opts{true, {{100, 200}}};
      const SessionResult h = run_session(ns, p, SessionConfig::finite_horizon(300), 55, opts);
      REQUIRE(h.trace);
      REQUIRE(h.trace->size() == 300);
      std::int64_t sum = 0;
      std::int64_t in_window = 0;
      for (std::size_t i = 0; i < h.trace->size(); ++i) {
        const RoundOutcome& o = (*h.trace)[i];
        CHECK(o.round == static_cast<Round>(i + 1));
        CHECK(o.net_reward == (o.won ? ns.bets()[o.arm].net_payout : -1));
        sum += o.net_reward;
        if (o.round >= 100 && o.round <= 200) ++in_window;
      }
      CHECK(h.final_balance == sum);
      CHECK(in_window == 101);
      std::int64_t window_total = 0;
      for (auto c : h.window_pulls[0]) window_total += c;
      CHECK(window_total == 101);

      const SessionResult b =
          run_session(ns, p, SessionConfig::until_bankrupt(20), 55, SessionOptions{true, {}});
      REQUIRE(b.trace);
      std::int64_t balance = 20;
      for (std::size_t i = 0; i < b.trace->size(); ++i) {
        balance += (*b.trace)[i].net_reward;
        if (i + 1 < b.trace->size()) CHECK(balance > 0);
      }
      CHECK(balance == b.final_balance);
      if (b.bankrupt) CHECK(b.final_balance <= 0);
    }
  }

  TEST_CASE("horizon prefix of a bankruptcy session matches") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    const SessionOptions opts{true, {}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SessionResult b =
          run_session(fair, PolicySpec::thompson(), SessionConfig::until_bankrupt(100), seed, opts);
      const Round t = std::min<Round>(b.rounds_played, 40);
      const SessionResult h =
          run_session(fair, PolicySpec::thompson(), SessionConfig::finite_horizon(t), seed, opts);
      for (Round i = 0; i < t; ++i) CHECK((*h.trace)[i] == (*b.trace)[i]);
    }
  }

  TEST_CASE("a larger bankroll never shortens survival") {
    const WheelModel fair = standard_wheel(WheelPreset::fair);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Round prev = 0;
      for (std::int64_t bankroll : {1, 2, 5, 10, 25, 50}) {
        const SessionResult r = run_session(fair, PolicySpec::epsilon_greedy(),
                                            SessionConfig::until_bankrupt(bankroll), seed);
        CHECK(r.rounds_played >= prev);
        prev = r.rounds_played;
      }
    }
  }

  TEST_CASE("session config validation") {
    CHECK_THROWS_AS(SessionConfig::finite_horizon(0).validate(), ConfigError);
    CHECK_THROWS_AS(SessionConfig::until_bankrupt(0).validate(), ConfigError);
    CHECK_THROWS_AS(SessionConfig::until_bankrupt(5, 0).validate(), ConfigError);
  }
}

TEST_SUITE("engine.metrics") {
  TEST_CASE("success_rate") {
    const std::vector<SessionResult> mixed{horizon_result(-5), horizon_result(0),
                                           horizon_result(3), horizon_result(-1)};
    CHECK(success_rate(mixed) == 0.5);
    CHECK(success_rate(mixed, SuccessRule::positive) == 0.25);
    CHECK(success_rate(std::vector{horizon_result(-1), horizon_result(-2)}) == 0.0);
    CHECK(success_rate(std::vector{horizon_result(0), horizon_result(0)}) == 1.0);
    CHECK_THROWS_AS(success_rate(std::vector<SessionResult>{}), UsageError);
  }

  TEST_CASE("survival_rounds rejects horizon sessions") {
    CHECK_THROWS_AS(survival_rounds(std::vector{horizon_result(1)}), UsageError);
    SessionResult b;
    b.mode = SessionMode::bankruptcy;
    CHECK_THROWS_AS(success_rate(std::vector{b}), UsageError);
  }

  TEST_CASE("median") {
    CHECK(median({3.0}) == 3.0);
    CHECK(median({4.0, 1.0, 3.0}) == 3.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS(median({}));
  }
}

TEST_SUITE("engine.experiment") {
  TEST_CASE("single session experiment wraps run_session") {
    ExperimentConfig c;
    c.policies = {{"random", PolicySpec::random()}};
    c.session = SessionConfig::finite_horizon(50);
    c.sessions_per_policy = 1;
    c.base_seed = 5;
    const ExperimentResult r = run_experiment(c, 1);
    REQUIRE(r.policies.size() == 1);
    REQUIRE(r.policies[0].sessions.size() == 1);
    const SessionResult direct =
        run_session(c.wheel, PolicySpec::random(), c.session, mix_seed(5, 0, 0));
    CHECK(r.policies[0].sessions[0] == direct);
    CHECK(r.policies[0].summary.success_rate == (direct.final_balance >= 0 ? 1.0 : 0.0));
  }

  TEST_CASE("results are independent of thread count and repeat exactly") {
    ExperimentConfig c = small_config(SessionConfig::until_bankrupt(30), 60);
    c.windows = {{1, 10}, {100, 200}};
    const ExperimentResult one = run_experiment(c, 1);
    const ExperimentResult many = run_experiment(c, 8);
    const ExperimentResult again = run_experiment(c, 3);
    REQUIRE(one.policies.size() == many.policies.size());
    for (std::size_t p = 0; p < one.policies.size(); ++p) {
      CHECK(one.policies[p].sessions == many.policies[p].sessions);
      CHECK(one.policies[p].sessions == again.policies[p].sessions);
      CHECK(*one.policies[p].summary.survival_median == *many.policies[p].summary.survival_median);
    }
  }

  TEST_CASE("summary fields per mode") {
    ExperimentConfig h = small_config(SessionConfig::finite_horizon(20), 100);
    h.windows = {{5, 8}};
    const ExperimentResult rh = run_experiment(h, 1);
    for (const PolicyResult& p : rh.policies) {
      CHECK(p.summary.sessions == 100);
      REQUIRE(p.summary.success_count);
      CHECK(*p.summary.success_rate == doctest::Approx(*p.summary.success_count / 100.0));
      CHECK_FALSE(p.summary.survival_median);
      double total = 0.0;
      for (double f : p.summary.arm_frequencies) total += f;
      CHECK(total == doctest::Approx(1.0));
      REQUIRE(p.summary.windows.size() == 1);
      CHECK(p.summary.windows[0].rounds == 400);
    }

    const ExperimentResult rb = run_experiment(small_config(SessionConfig::until_bankrupt(5), 50), 1);
    for (const PolicyResult& p : rb.policies) {
      CHECK_FALSE(p.summary.success_rate);
      REQUIRE(p.summary.survival_median);
      CHECK(*p.summary.survival_mean >= 5.0);
      CHECK(*p.summary.capped_count == 0);
    }
    CHECK(rb.find("td1") != nullptr);
    CHECK(rb.find("nope") == nullptr);
  }

  TEST_CASE("seeds differ across policies and sessions") {
    CHECK(mix_seed(1, 0, 0) != mix_seed(1, 0, 1));
    CHECK(mix_seed(1, 0, 0) != mix_seed(1, 1, 0));
    CHECK(mix_seed(1, 0, 0) != mix_seed(2, 0, 0));
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);  // published reference output
  }

  TEST_CASE("config validation names the field") {
    auto field_of = [](const ExperimentConfig& c) -> std::string {
      try {
        c.validate();
      } catch (const ConfigError& e) {
        return e.field();
      }
      return "<ok>";
    };
    ExperimentConfig c = small_config(SessionConfig::finite_horizon(50));
    CHECK(field_of(c) == "<ok>");

    ExperimentConfig bad = c;
    bad.policies.clear();
    CHECK(field_of(bad) == "policies");

    bad = c;
    bad.policies[1].spec.epsilon = 2.0;
    CHECK(field_of(bad) == "policies[1].epsilon");

    bad = c;
    bad.policies.push_back({"td0_again", PolicySpec::td0()});
    CHECK(field_of(bad) == "policies[5]");

    bad = c;
    bad.policies.push_back({"random", PolicySpec::td0(0.5)});
    CHECK(field_of(bad) == "policies[5].label");

    bad = c;
    bad.sessions_per_policy = 0;
    CHECK(field_of(bad) == "sessions_per_policy");

    bad = c;
    bad.windows = {{10, 5}};
    CHECK(field_of(bad) == "selection_windows[0].to");

    bad = c;
    bad.session.horizon = 0;
    CHECK(field_of(bad) == "session.horizon");
  }
}
