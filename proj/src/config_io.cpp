#include "rgt/config_io.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include "rgt/error.hpp"

namespace rgt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
}

void allow_keys(const json& doc, const std::string& path, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : doc.items())
    if (!allowed.count(key)) throw ConfigError(at(path, key), "unknown or irrelevant key");
}

const json& member(const json& doc, const std::string& path, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(at(path, key), "required field is missing");
  return *it;
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::fabs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(path, "expected an integer");
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(path, "expected a nonnegative 64-bit integer");
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

// Runs a parse_* helper and turns its UsageError into a ConfigError at `path`.
template <class F>
auto parse_enum(const json& v, const std::string& path, F parse) {
  const std::string s = as_string(v, path);
  try {
    return parse(s);
  } catch (const ConfigError&) {
    throw;
  } catch (const UsageError& e) {
    throw ConfigError(path, e.what());
  }
}

SessionConfig parse_session(const json& doc, const std::string& path) {
  require_object(doc, path);
  SessionConfig c;
  c.mode = parse_enum(member(doc, path, "mode"), at(path, "mode"), parse_session_mode);
  if (c.mode == SessionMode::horizon) {
    allow_keys(doc, path, {"mode", "horizon"});
    c.horizon = as_int(member(doc, path, "horizon"), at(path, "horizon"));
  } else {
    allow_keys(doc, path, {"mode", "initial_bankroll", "round_cap"});
    if (doc.contains("initial_bankroll"))
      c.initial_bankroll = as_int(doc["initial_bankroll"], at(path, "initial_bankroll"));
    if (doc.contains("round_cap")) c.round_cap = as_int(doc["round_cap"], at(path, "round_cap"));
  }
  c.validate();
  return c;
}

}  // namespace

WheelModel parse_wheel(const json& doc, const std::string& path) {
  require_object(doc, path);
  if (doc.contains("preset")) {
    allow_keys(doc, path, {"preset", "zero_payout_convention"});
    const WheelPreset preset =
        parse_enum(doc["preset"], at(path, "preset"), parse_wheel_preset);
    ZeroPayoutConvention conv = ZeroPayoutConvention::net35;
    if (doc.contains("zero_payout_convention"))
      conv = parse_enum(doc["zero_payout_convention"], at(path, "zero_payout_convention"),
                        parse_zero_payout_convention);
    return standard_wheel(preset, conv);
  }

  allow_keys(doc, path, {"bets", "schedule"});
  std::vector<BetSpec> bets;
  const std::string bets_path = at(path, "bets");
  const json& jbets = as_array(member(doc, path, "bets"), bets_path);
  for (std::size_t i = 0; i < jbets.size(); ++i) {
    const std::string p = index(bets_path, i);
    const json& b = jbets[i];
    require_object(b, p);
    allow_keys(b, p, {"label", "win_prob", "net_payout"});
    bets.push_back({as_string(member(b, p, "label"), at(p, "label")),
                    as_real(member(b, p, "win_prob"), at(p, "win_prob")),
                    static_cast<int>(as_int(member(b, p, "net_payout"), at(p, "net_payout")))});
  }
  std::vector<ScheduleOverride> schedule;
  if (doc.contains("schedule")) {
    const std::string sched_path = at(path, "schedule");
    const json& js = as_array(doc["schedule"], sched_path);
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string p = index(sched_path, i);
      const json& o = js[i];
      require_object(o, p);
      allow_keys(o, p, {"from", "to", "arm", "win_prob"});
      schedule.push_back({as_int(member(o, p, "from"), at(p, "from")),
                          as_int(member(o, p, "to"), at(p, "to")),
                          as_string(member(o, p, "arm"), at(p, "arm")),
                          as_real(member(o, p, "win_prob"), at(p, "win_prob"))});
    }
  }
  try {
    return WheelModel(std::move(bets), std::move(schedule));
  } catch (const ConfigError& e) {
    throw e.prefixed(path);
  }
}

PolicySpec parse_policy(const json& doc, const std::string& path, std::string* label) {
  require_object(doc, path);
  PolicySpec spec;
  spec.kind = parse_enum(member(doc, path, "kind"), at(path, "kind"), parse_policy_kind);
  switch (spec.kind) {
    case PolicyKind::random:
      allow_keys(doc, path, {"kind", "label"});
      break;
    case PolicyKind::epsilon_greedy:
      allow_keys(doc, path, {"kind", "label", "epsilon"});
      if (doc.contains("epsilon")) spec.epsilon = as_real(doc["epsilon"], at(path, "epsilon"));
      break;
    case PolicyKind::thompson:
      allow_keys(doc, path, {"kind", "label", "ts_objective"});
      if (doc.contains("ts_objective"))
        spec.ts_objective =
            parse_enum(doc["ts_objective"], at(path, "ts_objective"), parse_thompson_objective);
      break;
    case PolicyKind::td:
      spec.td_variant = parse_enum(member(doc, path, "lambda_variant"),
                                   at(path, "lambda_variant"), parse_td_variant);
      if (spec.td_variant == TdVariant::td0) {
        allow_keys(doc, path, {"kind", "label", "lambda_variant", "learning_rate"});
        if (doc.contains("learning_rate"))
          spec.learning_rate = as_real(doc["learning_rate"], at(path, "learning_rate"));
      } else {
        allow_keys(doc, path, {"kind", "label", "lambda_variant"});
      }
      break;
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw e.prefixed(path);
  }
  if (label) {
    *label = doc.contains("label") ? as_string(doc["label"], at(path, "label"))
                                   : spec.default_label();
  }
  return spec;
}

ExperimentConfig parse_experiment_config(const json& doc) {
  require_object(doc, "");
  allow_keys(doc, "", {"wheel", "session", "policies", "sessions_per_policy", "base_seed", "trace",
                       "success_rule", "selection_windows"});
  ExperimentConfig c;
  c.wheel = parse_wheel(member(doc, "", "wheel"), "wheel");
  c.session = parse_session(member(doc, "", "session"), "session");

  const json& jp = as_array(member(doc, "", "policies"), "policies");
  for (std::size_t i = 0; i < jp.size(); ++i) {
    NamedPolicy np;
    np.spec = parse_policy(jp[i], index("policies", i), &np.label);
    c.policies.push_back(std::move(np));
  }
  if (doc.contains("sessions_per_policy"))
    c.sessions_per_policy = as_int(doc["sessions_per_policy"], "sessions_per_policy");
  if (doc.contains("base_seed")) c.base_seed = as_u64(doc["base_seed"], "base_seed");
  if (doc.contains("trace")) c.trace = as_bool(doc["trace"], "trace");
  if (doc.contains("success_rule"))
    c.success_rule = parse_enum(doc["success_rule"], "success_rule", parse_success_rule);
  if (doc.contains("selection_windows")) {
    const json& jw = as_array(doc["selection_windows"], "selection_windows");
    for (std::size_t i = 0; i < jw.size(); ++i) {
      const std::string p = index("selection_windows", i);
      require_object(jw[i], p);
      allow_keys(jw[i], p, {"from", "to"});
      c.windows.push_back({as_int(member(jw[i], p, "from"), at(p, "from")),
                           as_int(member(jw[i], p, "to"), at(p, "to"))});
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_experiment_config(doc);
}

ordered_json to_json(const WheelModel& wheel) {
  ordered_json bets = ordered_json::array();
  for (const BetSpec& b : wheel.bets())
    bets.push_back({{"label", b.label}, {"win_prob", b.win_prob}, {"net_payout", b.net_payout}});
  ordered_json schedule = ordered_json::array();
  for (const ScheduleOverride& o : wheel.schedule())
    schedule.push_back({{"from", o.from_round},
                        {"to", o.to_round},
                        {"arm", o.arm_label},
                        {"win_prob", o.win_prob}});
  return {{"bets", std::move(bets)}, {"schedule", std::move(schedule)}};
}

ordered_json to_json(const PolicySpec& spec) {
  ordered_json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case PolicyKind::random: break;
    case PolicyKind::epsilon_greedy: j["epsilon"] = spec.epsilon; break;
    case PolicyKind::thompson: j["ts_objective"] = to_string(spec.ts_objective); break;
    case PolicyKind::td:
      j["lambda_variant"] = to_string(spec.td_variant);
      if (spec.td_variant == TdVariant::td0) j["learning_rate"] = spec.learning_rate;
      break;
  }
  return j;
}

ordered_json to_json(const ExperimentConfig& config) {
  ordered_json session;
  session["mode"] = to_string(config.session.mode);
  if (config.session.mode == SessionMode::horizon) {
    session["horizon"] = config.session.horizon;
  } else {
    session["initial_bankroll"] = config.session.initial_bankroll;
    session["round_cap"] = config.session.round_cap;
  }
  ordered_json policies = ordered_json::array();
  for (const NamedPolicy& p : config.policies) {
    ordered_json j;
    j["label"] = p.label;
    j.update(to_json(p.spec));
    policies.push_back(std::move(j));
  }
  ordered_json windows = ordered_json::array();
  for (const RoundWindow& w : config.windows)
    windows.push_back({{"from", w.from_round}, {"to", w.to_round}});

  ordered_json j;
  j["wheel"] = to_json(config.wheel);
  j["session"] = std::move(session);
  j["policies"] = std::move(policies);
  j["sessions_per_policy"] = config.sessions_per_policy;
  j["base_seed"] = config.base_seed;
  j["trace"] = config.trace;
  j["success_rule"] = to_string(config.success_rule);
  j["selection_windows"] = std::move(windows);
  return j;
}

}  // namespace rgt
