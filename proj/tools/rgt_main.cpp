// rgt: run random-guesser-test experiments and analyze their results.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rgt/commands.hpp"
#include "rgt/results_io.hpp"

namespace {

template <class T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof())
      throw CLI::ValidationError("list", "cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random guesser test: bandit policies vs. a uniform random baseline"};
  app.set_version_flag("--version", rgt::kToolVersion);
  app.require_subcommand(1);

  rgt::cli::GlobalOptions global;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config's base seed")->type_name("U64");
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores)");
  app.add_flag("--csv", global.csv, "Also write a per-session CSV next to the results");
  app.add_flag("--quiet", global.quiet, "Suppress progress output");

  std::string config_path, out_path;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->fallthrough();
  run->add_option("config", config_path, "Experiment config JSON")->required();
  run->add_option("-o,--out", out_path, "Results JSON")->required();

  std::string results_path, control = "random", format = "csv";
  auto* anova = app.add_subcommand("anova", "One-way ANOVA of each policy against a control");
  anova->fallthrough();
  anova->add_option("results", results_path, "Results JSON")->required();
  anova->add_option("--control", control, "Control group label")->capture_default_str();
  anova->add_option("--format", format, "csv or pretty")
      ->check(CLI::IsMember({"csv", "pretty"}))
      ->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Closed-form analyses");
  analyze->require_subcommand(1);
  std::string theta_text, payout_text;
  auto* topreward =
      analyze->add_subcommand("topreward", "Probability each arm yields the top realized payout");
  topreward->fallthrough();
  topreward->add_option("--theta", theta_text, "Comma-separated win probabilities")->required();
  topreward->add_option("--payout", payout_text, "Comma-separated net payouts")->required();

  std::string hist_results, hist_out, metric = "survival", edges_text;
  int bins = 20;
  auto* hist = app.add_subcommand("histogram", "Emit plot-ready histogram CSV");
  hist->fallthrough();
  hist->add_option("results", hist_results, "Results JSON")->required();
  hist->add_option("-o,--out", hist_out, "Output CSV")->required();
  hist->add_option("--metric", metric, "success_rate or survival")
      ->check(CLI::IsMember({"success_rate", "survival"}))
      ->capture_default_str();
  auto* bins_opt = hist->add_option("--bins", bins, "Equal-width bin count")->capture_default_str();
  hist->add_option("--edges", edges_text, "Comma-separated explicit bin edges")->excludes(bins_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rgt::cli::kUsage;
  }
  if (seed_opt->count() > 0) global.seed = seed;

  try {
    if (*run) return rgt::cli::cmd_run(config_path, out_path, global, std::cout, std::cerr);
    if (*anova)
      return rgt::cli::cmd_anova(results_path, control,
                                 format == "pretty" ? rgt::cli::TableFormat::pretty
                                                    : rgt::cli::TableFormat::csv,
                                 std::cout, std::cerr);
    if (*topreward)
      return rgt::cli::cmd_analyze_topreward(split_list<double>(theta_text),
                                             split_list<int>(payout_text), std::cout, std::cerr);
    if (*hist) {
      rgt::HistogramSpec spec;
      spec.metric = rgt::parse_histogram_metric(metric);
      spec.bins = bins;
      if (!edges_text.empty()) spec.edges = split_list<double>(edges_text);
      return rgt::cli::cmd_histogram(hist_results, spec, hist_out, std::cout, std::cerr);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rgt::cli::kUsage;
  }
  return rgt::cli::kUsage;
}
