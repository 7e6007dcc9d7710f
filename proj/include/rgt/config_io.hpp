#pragma once

#include <string>

#include "json.hpp"
#include "rgt/engine.hpp"

namespace rgt {

// Experiment config <-> JSON. Parsing is strict: unknown keys, wrong types
// and parameters irrelevant to a policy kind raise ConfigError with the
// field path.
//
//   {"wheel": {"preset": "fair", "zero_payout_convention": "net35"}
//          | {"bets": [{"label", "win_prob", "net_payout"}, ...],
//             "schedule": [{"from", "to", "arm", "win_prob"}, ...]},
//    "session": {"mode": "horizon", "horizon": 50}
//             | {"mode": "bankruptcy", "initial_bankroll": 100, "round_cap": 1000000},
//    "policies": [{"kind": "thompson", "ts_objective": "expected_reward"}, ...],
//    "sessions_per_policy": 10000, "base_seed": 0, "trace": false,
//    "success_rule": "nonnegative", "selection_windows": [{"from", "to"}]}
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig parse_experiment_config_text(const std::string& text);

// Canonical form: the wheel is always written out as explicit bets and
// schedule, and every relevant policy parameter is present.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

WheelModel parse_wheel(const nlohmann::json& doc, const std::string& path = "wheel");
nlohmann::ordered_json to_json(const WheelModel& wheel);

PolicySpec parse_policy(const nlohmann::json& doc, const std::string& path, std::string* label);
nlohmann::ordered_json to_json(const PolicySpec& spec);

}  // namespace rgt
