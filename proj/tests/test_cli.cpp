#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "rgt/commands.hpp"
#include "rgt/results_io.hpp"

namespace fs = std::filesystem;
using namespace rgt;
using namespace rgt::cli;

namespace {

const fs::path kSource = RGT_SOURCE_DIR;
const std::string kGolden = (kSource / "tests/data/golden_fair_t500.json").string();

struct ScratchDir {
  fs::path path = fs::temp_directory_path() / ("rgt_cli_" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(path); }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

const fs::path& scratch() {
  static const ScratchDir dir;
  return dir.path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string without_timestamp(const std::string& s) {
  static const std::regex ts(R"re("timestamp"\s*:\s*"[^"]*")re");
  return std::regex_replace(s, ts, "\"timestamp\":\"\"");
}

const char* kSmallHorizon = R"({
  "wheel": {"preset": "fair"},
  "session": {"mode": "horizon", "horizon": 50},
  "policies": [{"kind": "random"}, {"kind": "epsilon_greedy", "epsilon": 0.1},
               {"kind": "thompson"}, {"kind": "td", "lambda_variant": "td0", "learning_rate": 0.1},
               {"kind": "td", "lambda_variant": "td1"}],
  "sessions_per_policy": 300, "base_seed": 7})";

const char* kSmallBankrupt = R"({
  "wheel": {"preset": "nonstationary"},
  "session": {"mode": "bankruptcy", "initial_bankroll": 10, "round_cap": 100000},
  "policies": [{"kind": "random"}, {"kind": "thompson"}],
  "sessions_per_policy": 200, "base_seed": 3, "selection_windows": [{"from": 100, "to": 200}]})";

struct Run {
  int code;
  std::string out, err;
};

Run run(const fs::path& config, const fs::path& results, GlobalOptions opt = {}) {
  opt.quiet = true;
  std::ostringstream out, err;
  const int code = cmd_run(config.string(), results.string(), opt, out, err);
  return {code, out.str(), err.str()};
}

Run anova(const std::string& results, const std::string& control = "random",
          TableFormat f = TableFormat::csv) {
  std::ostringstream out, err;
  const int code = cmd_anova(results, control, f, out, err);
  return {code, out.str(), err.str()};
}

Run histogram(const std::string& results, const HistogramSpec& spec, const fs::path& dest) {
  std::ostringstream out, err;
  const int code = cmd_histogram(results, spec, dest.string(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(RGT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli run") {
  TEST_CASE("results JSON carries config, manifest and every policy") {
    const fs::path cfg = write_config("small.json", kSmallHorizon);
    const fs::path res = scratch() / "small.results.json";
    REQUIRE(run(cfg, res).code == kOk);
    const auto doc = nlohmann::json::parse(slurp(res));
    CHECK(doc["manifest"]["config_checksum"] == sha256_hex(slurp(cfg)));
    CHECK(doc["manifest"]["base_seed"] == 7);
    CHECK(doc["manifest"]["tool_version"] == kToolVersion);
    CHECK(doc["policies"].size() == 5);
    CHECK(doc["policies"][0]["sessions"].size() == 300);
    CHECK(doc["policies"][0]["summary"].contains("success_rate"));
  }

  TEST_CASE("output does not depend on the thread count") {
    const fs::path cfg = write_config("threads.json", kSmallBankrupt);
    GlobalOptions one, eight;
    one.threads = 1;
    eight.threads = 8;
    REQUIRE(run(cfg, scratch() / "t1.json", one).code == kOk);
    REQUIRE(run(cfg, scratch() / "t8.json", eight).code == kOk);
    CHECK(without_timestamp(slurp(scratch() / "t1.json")) ==
          without_timestamp(slurp(scratch() / "t8.json")));
  }

  TEST_CASE("seed override and manifest reproduce a run") {
    const fs::path cfg = write_config("seeded.json", kSmallHorizon);
    GlobalOptions opt;
    opt.seed = 99;
    REQUIRE(run(cfg, scratch() / "s99.json", opt).code == kOk);
    const auto first = nlohmann::json::parse(slurp(scratch() / "s99.json"));
    CHECK(first["manifest"]["base_seed"] == 99);

    // Replay from the manifest: same config bytes, seed taken from the manifest.
    GlobalOptions replay;
    replay.seed = first["manifest"]["base_seed"].get<std::uint64_t>();
    REQUIRE(run(cfg, scratch() / "replay.json", replay).code == kOk);
    CHECK(without_timestamp(slurp(scratch() / "s99.json")) ==
          without_timestamp(slurp(scratch() / "replay.json")));

    REQUIRE(run(cfg, scratch() / "s7.json").code == kOk);
    CHECK(without_timestamp(slurp(scratch() / "s7.json")) !=
          without_timestamp(slurp(scratch() / "s99.json")));
  }

  TEST_CASE("SOURCE_DATE_EPOCH makes reruns byte identical") {
    const fs::path cfg = write_config("epoch.json", kSmallHorizon);
    setenv("SOURCE_DATE_EPOCH", "1716854400", 1);
    REQUIRE(run(cfg, scratch() / "e1.json").code == kOk);
    REQUIRE(run(cfg, scratch() / "e2.json").code == kOk);
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(slurp(scratch() / "e1.json") == slurp(scratch() / "e2.json"));
  }

  TEST_CASE("per-session CSV starts with the manifest") {
    const fs::path cfg = write_config("csv.json", kSmallBankrupt);
    GlobalOptions opt;
    opt.csv = true;
    REQUIRE(run(cfg, scratch() / "csvrun.json", opt).code == kOk);
    const auto rows = lines(slurp(scratch() / "csvrun.sessions.csv"));
    REQUIRE(rows.size() == 2 + 400);
    CHECK(rows[0].rfind("# manifest {", 0) == 0);
    CHECK(rows[0].find(sha256_hex(slurp(cfg))) != std::string::npos);
    CHECK(rows[1] == "policy,session_index,rounds_played,final_balance,bankrupt,capped");
    CHECK(rows[2].rfind("random,0,", 0) == 0);
  }

  TEST_CASE("bankruptcy summary and selection windows") {
    const fs::path cfg = write_config("bk.json", kSmallBankrupt);
    REQUIRE(run(cfg, scratch() / "bk.results.json").code == kOk);
    const auto doc = nlohmann::json::parse(slurp(scratch() / "bk.results.json"));
    const auto& summary = doc["policies"][1]["summary"];
    CHECK(summary.contains("survival_median"));
    CHECK_FALSE(summary.contains("success_rate"));
    for (const auto& s : doc["policies"][1]["sessions"]) {
      CHECK(s["final_balance"] == 0);
      CHECK(s["bankrupt"] == true);
    }
  }

  TEST_CASE("config errors exit 2 and name the field") {
    const fs::path cfg = write_config(
        "bad.json", R"({"wheel":{"preset":"fair"},"session":{"mode":"horizon","horizon":-1},
                        "policies":[{"kind":"random"}]})");
    const Run r = run(cfg, scratch() / "bad.results.json");
    CHECK(r.code == kUsage);
    CHECK(r.err.find("session.horizon") != std::string::npos);
    CHECK_FALSE(fs::exists(scratch() / "bad.results.json"));
  }

  TEST_CASE("I/O failures exit 3") {
    CHECK(run(scratch() / "missing.json", scratch() / "x.json").code == kIo);
    const fs::path cfg = write_config("io.json", kSmallHorizon);
    CHECK(run(cfg, scratch() / "no_such_dir" / "x.json").code == kIo);
  }
}

TEST_SUITE("cli anova") {
  TEST_CASE("golden T=500 results: four pairwise rows then the omnibus row") {
    const Run r = anova(kGolden);
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "label,f,df1,df2,p,degenerate");
    const char* expected[] = {"epsilon_greedy", "thompson", "td0", "td1"};
    for (int i = 0; i < 4; ++i) {
      std::istringstream in(rows[1 + i]);
      std::string label, f, df1, df2, p;
      std::getline(in, label, ',');
      std::getline(in, f, ',');
      std::getline(in, df1, ',');
      std::getline(in, df2, ',');
      std::getline(in, p, ',');
      CHECK(label == expected[i]);
      CHECK(df1 == "1");
      CHECK(df2 == "19998");
      CHECK(std::stod(p) < 0.05);
    }
    CHECK(rows[5].rfind("omnibus,", 0) == 0);
    CHECK(rows[5].find(",4,49995,") != std::string::npos);
  }

  TEST_CASE("pretty format has the same rows") {
    const Run r = anova(kGolden, "random", TableFormat::pretty);
    REQUIRE(r.code == kOk);
    CHECK(lines(r.out).size() == 6);
  }

  TEST_CASE("bankruptcy results use survival rounds") {
    const fs::path cfg = write_config("bka.json", kSmallBankrupt);
    REQUIRE(run(cfg, scratch() / "bka.results.json").code == kOk);
    const Run r = anova((scratch() / "bka.results.json").string(), "thompson");
    REQUIRE(r.code == kOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].rfind("random,", 0) == 0);
    CHECK(rows[1].find(",1,398,") != std::string::npos);
    CHECK(rows[2].rfind("omnibus,", 0) == 0);
  }

  TEST_CASE("error paths") {
    CHECK(anova(kGolden, "nobody").code == kUsage);
    std::ofstream(scratch() / "empty.json") << "";
    CHECK(anova((scratch() / "empty.json").string()).code == kUsage);
    std::ofstream(scratch() / "junk.json") << "{\"manifest\": 3";
    CHECK(anova((scratch() / "junk.json").string()).code == kUsage);
    CHECK(anova((scratch() / "absent.json").string()).code == kIo);
  }
}

TEST_SUITE("cli analyze") {
  TEST_CASE("three-bet wheel") {
    std::ostringstream out, err;
    REQUIRE(cmd_analyze_topreward({1.0 / 37, 4.0 / 37, 18.0 / 37}, {35, 8, 1}, out, err) == kOk);
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].find("0.04875182508") != std::string::npos);
    std::istringstream disc(rows[2]);
    std::string name;
    double d = 1;
    disc >> name >> d;
    CHECK(name == "discrepancy");
    CHECK(d <= 1e-12);
  }

  TEST_CASE("single arm wins outright") {
    std::ostringstream out, err;
    REQUIRE(cmd_analyze_topreward({0.3}, {2}, out, err) == kOk);
    CHECK(lines(out.str())[0].find(" 1") != std::string::npos);
  }

  TEST_CASE("invalid vectors exit 2") {
    std::ostringstream out, err;
    CHECK(cmd_analyze_topreward({0.3, 0.4}, {2, 2}, out, err) == kUsage);
    CHECK(cmd_analyze_topreward({0.3, 0.4}, {2}, out, err) == kUsage);
    CHECK(cmd_analyze_topreward({1.3}, {2}, out, err) == kUsage);
    CHECK(cmd_analyze_topreward({}, {}, out, err) == kUsage);
  }
}

TEST_SUITE("cli histogram") {
  TEST_CASE("survival: 20 bins per policy with the manifest header") {
    const fs::path cfg = write_config("hist.json", kSmallBankrupt);
    const fs::path res = scratch() / "hist.results.json";
    REQUIRE(run(cfg, res).code == kOk);
    HistogramSpec spec;
    REQUIRE(histogram(res.string(), spec, scratch() / "hist.csv").code == kOk);
    const auto rows = lines(slurp(scratch() / "hist.csv"));
    REQUIRE(rows.size() == 2 + 40);
    CHECK(rows[0].rfind("# manifest {", 0) == 0);
    CHECK(rows[1] == "group,bin_lo,bin_hi,count");
    std::int64_t total = 0;
    double last_hi = -1;
    for (std::size_t i = 2; i < 22; ++i) {
      std::istringstream in(rows[i]);
      std::string group, lo, hi, count;
      std::getline(in, group, ',');
      std::getline(in, lo, ',');
      std::getline(in, hi, ',');
      std::getline(in, count, ',');
      CHECK(group == "random");
      CHECK(std::stod(lo) < std::stod(hi));
      if (last_hi >= 0) CHECK(std::stod(lo) == last_hi);
      last_hi = std::stod(hi);
      total += std::stoll(count);
    }
    CHECK(total == 200);
  }

  TEST_CASE("success_rate: one row per policy with a rate in [0, 1]") {
    HistogramSpec spec;
    spec.metric = HistogramMetric::success_rate;
    REQUIRE(histogram(kGolden, spec, scratch() / "succ.csv").code == kOk);
    const auto rows = lines(slurp(scratch() / "succ.csv"));
    REQUIRE(rows.size() == 2 + 5);
    CHECK(rows[1] == "group,bin_lo,bin_hi,count,rate");
    for (std::size_t i = 2; i < rows.size(); ++i) {
      const double rate = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
      CHECK(rate >= 0.0);
      CHECK(rate <= 1.0);
    }
  }

  TEST_CASE("error paths") {
    HistogramSpec spec;  // survival on horizon results
    CHECK(histogram(kGolden, spec, scratch() / "m.csv").code == kUsage);
    std::ofstream(scratch() / "empty2.json") << "\n";
    spec.metric = HistogramMetric::success_rate;
    CHECK(histogram((scratch() / "empty2.json").string(), spec, scratch() / "m.csv").code == kUsage);
    CHECK(histogram(kGolden, spec, scratch() / "nodir" / "m.csv").code == kIo);
  }
}

TEST_SUITE("cli binary") {
  TEST_CASE("exit codes of the executable") {
    CHECK(shell("--version") == 0);
    CHECK(shell("") == kUsage);
    CHECK(shell("frobnicate") == kUsage);
    CHECK(shell("analyze topreward --theta 0.1,0.2 --payout 3,3") == kUsage);
    CHECK(shell("analyze topreward --theta 0.1,x --payout 3,4") == kUsage);
    CHECK(shell("analyze topreward --theta 0.027027,0.108108,0.486486 --payout 35,8,1") == kOk);
    CHECK(shell("anova " + kGolden + " --control nobody") == kUsage);
    CHECK(shell("anova " + kGolden + " --format xml") == kUsage);
    CHECK(shell("anova /nonexistent/results.json") == kIo);
    CHECK(shell("histogram " + kGolden + " -o /dev/null --bins 5 --edges 0,1") == kUsage);
  }
}
