#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rgt/engine.hpp"

namespace rgt {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
  std::string config_checksum;  // sha256 of the config file bytes, lowercase hex
  std::uint64_t base_seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;        // ISO-8601 UTC

  bool operator==(const RunManifest&) const = default;
};

std::string sha256_hex(const std::string& bytes);

// Current UTC time, or SOURCE_DATE_EPOCH when that variable is set.
std::string utc_timestamp();

nlohmann::ordered_json to_json(const RunManifest& manifest);
RunManifest parse_manifest(const nlohmann::json& doc);

// One line, suitable for a leading "# " comment in CSV output.
std::string manifest_comment(const RunManifest& manifest);

//   {"manifest": {...}, "config": {...}, "mode": "horizon", "arms": [...],
//    "policies": [{"label", "policy", "summary", "sessions": [...]}]}
nlohmann::ordered_json results_to_json(const RunManifest& manifest, const ExperimentConfig& config,
                                       const ExperimentResult& result);

// Indented JSON down to `expanded_depth` levels; anything nested deeper is
// written compactly on one line (one session per line in results files).
std::string format_json(const nlohmann::ordered_json& doc, int expanded_depth = 4);

// Per-session rows of a results document, enough to rebuild statistics.
struct LoadedPolicy {
  std::string label;
  std::vector<SessionResult> sessions;
};

struct LoadedResults {
  RunManifest manifest;
  SessionMode mode = SessionMode::horizon;
  SuccessRule success_rule = SuccessRule::nonnegative;
  std::vector<LoadedPolicy> policies;
};

// Throws UsageError when the document is malformed or holds no sessions.
LoadedResults parse_results(const nlohmann::json& doc);

// "policy,session_index,rounds_played,final_balance,bankrupt,capped"
void write_sessions_csv(std::ostream& out, const RunManifest& manifest,
                        const ExperimentResult& result);

}  // namespace rgt
