#include "rgt/results_io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>

#include "rgt/config_io.hpp"
#include "rgt/error.hpp"

namespace rgt {

using nlohmann::json;
using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("sha256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch)
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json to_json(const RunManifest& m) {
  return {{"config_checksum", m.config_checksum},
          {"base_seed", m.base_seed},
          {"tool_version", m.tool_version},
          {"timestamp", m.timestamp}};
}

RunManifest parse_manifest(const json& doc) {
  try {
    RunManifest m;
    m.config_checksum = doc.at("config_checksum").get<std::string>();
    m.base_seed = doc.at("base_seed").get<std::uint64_t>();
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.timestamp = doc.at("timestamp").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw UsageError(std::string("manifest: ") + e.what());
  }
}

std::string manifest_comment(const RunManifest& m) { return "manifest " + to_json(m).dump(); }

namespace {

void format_into(std::string& out, const ordered_json& j, int depth, int expanded_depth) {
  const bool container = j.is_object() || j.is_array();
  if (!container || j.empty() || depth >= expanded_depth) {
    out += j.dump();
    return;
  }
  const std::string pad(2 * (depth + 1), ' ');
  out += j.is_object() ? '{' : '[';
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out += first ? "\n" : ",\n";
    first = false;
    out += pad;
    if (j.is_object()) {
      out += ordered_json(it.key()).dump();
      out += ": ";
    }
    format_into(out, it.value(), depth + 1, expanded_depth);
  }
  out += '\n';
  out.append(2 * depth, ' ');
  out += j.is_object() ? '}' : ']';
}

}  // namespace

std::string format_json(const ordered_json& doc, int expanded_depth) {
  std::string out;
  format_into(out, doc, 0, expanded_depth);
  out += '\n';
  return out;
}

namespace {

ordered_json summary_to_json(const PolicySummary& s) {
  ordered_json j;
  j["sessions"] = s.sessions;
  j["mean_final_balance"] = s.mean_final_balance;
  if (s.success_count) j["success_count"] = *s.success_count;
  if (s.success_rate) j["success_rate"] = *s.success_rate;
  if (s.survival_mean) j["survival_mean"] = *s.survival_mean;
  if (s.survival_median) j["survival_median"] = *s.survival_median;
  if (s.capped_count) j["capped_count"] = *s.capped_count;
  ordered_json windows = ordered_json::array();
  for (const WindowFrequencies& w : s.windows)
    windows.push_back({{"from", w.window.from_round},
                       {"to", w.window.to_round},
                       {"rounds", w.rounds},
                       {"frequencies", w.frequencies}});
  j["arm_selection_frequencies"] = {{"overall", s.arm_frequencies},
                                    {"windows", std::move(windows)}};
  return j;
}

ordered_json session_to_json(const SessionResult& r) {
  ordered_json j;
  j["rounds_played"] = r.rounds_played;
  j["final_balance"] = r.final_balance;
  j["bankrupt"] = r.bankrupt;
  j["capped"] = r.capped;
  if (r.trace) {
    ordered_json trace = ordered_json::array();
    for (const RoundOutcome& o : *r.trace)
      trace.push_back({{"round", o.round},
                       {"arm", o.arm},
                       {"won", o.won},
                       {"net_reward", o.net_reward}});
    j["trace"] = std::move(trace);
  }
  return j;
}

}  // namespace

ordered_json results_to_json(const RunManifest& manifest, const ExperimentConfig& config,
                             const ExperimentResult& result) {
  ordered_json arms = ordered_json::array();
  for (const BetSpec& b : config.wheel.bets()) arms.push_back(b.label);

  ordered_json policies = ordered_json::array();
  for (const PolicyResult& p : result.policies) {
    ordered_json sessions = ordered_json::array();
    for (const SessionResult& r : p.sessions) sessions.push_back(session_to_json(r));
    ordered_json jp;
    jp["label"] = p.label;
    jp["policy"] = to_json(p.spec);
    jp["summary"] = summary_to_json(p.summary);
    jp["sessions"] = std::move(sessions);
    policies.push_back(std::move(jp));
  }

  ordered_json j;
  j["manifest"] = to_json(manifest);
  j["config"] = to_json(config);
  j["mode"] = to_string(result.mode);
  j["arms"] = std::move(arms);
  j["policies"] = std::move(policies);
  return j;
}

LoadedResults parse_results(const json& doc) {
  if (!doc.is_object()) throw UsageError("results: expected a JSON object");
  LoadedResults out;
  try {
    out.manifest = parse_manifest(doc.at("manifest"));
    out.mode = parse_session_mode(doc.at("mode").get<std::string>());
    if (doc.contains("config") && doc["config"].contains("success_rule"))
      out.success_rule = parse_success_rule(doc["config"]["success_rule"].get<std::string>());
    for (const json& jp : doc.at("policies")) {
      LoadedPolicy p;
      p.label = jp.at("label").get<std::string>();
      for (const json& js : jp.at("sessions")) {
        SessionResult r;
        r.mode = out.mode;
        r.rounds_played = js.at("rounds_played").get<Round>();
        r.final_balance = js.at("final_balance").get<std::int64_t>();
        r.bankrupt = js.at("bankrupt").get<bool>();
        r.capped = js.at("capped").get<bool>();
        p.sessions.push_back(std::move(r));
      }
      out.policies.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("results: malformed document: ") + e.what());
  }
  if (out.policies.empty()) throw UsageError("results: no policies");
  for (const LoadedPolicy& p : out.policies)
    if (p.sessions.empty()) throw UsageError("results: policy '" + p.label + "' has no sessions");
  return out;
}

void write_sessions_csv(std::ostream& out, const RunManifest& manifest,
                        const ExperimentResult& result) {
  out << "# " << manifest_comment(manifest) << '\n';
  out << "policy,session_index,rounds_played,final_balance,bankrupt,capped\n";
  for (const PolicyResult& p : result.policies) {
    for (std::size_t j = 0; j < p.sessions.size(); ++j) {
      const SessionResult& r = p.sessions[j];
      out << p.label << ',' << j << ',' << r.rounds_played << ',' << r.final_balance << ','
          << (r.bankrupt ? "true" : "false") << ',' << (r.capped ? "true" : "false") << '\n';
    }
  }
}

}  // namespace rgt
