#include "rgt/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rgt/analysis.hpp"
#include "rgt/config_io.hpp"
#include "rgt/error.hpp"
#include "rgt/stats.hpp"

namespace rgt::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

LoadedResults load_results(const std::string& path) {
  const std::string text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw UsageError("results file '" + path + "' is empty");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("results file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_results(doc);
}

// Maps the library's exception types onto the CLI exit-code contract.
template <class F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: config field " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

std::vector<double> metric_values(const LoadedResults& results, const LoadedPolicy& p) {
  std::vector<double> v;
  v.reserve(p.sessions.size());
  for (const SessionResult& r : p.sessions) {
    if (results.mode == SessionMode::horizon)
      v.push_back(is_success(r, results.success_rule) ? 1.0 : 0.0);
    else
      v.push_back(static_cast<double>(r.rounds_played));
  }
  return v;
}

void print_vector(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << std::left << std::setw(13) << name << std::right;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << std::setprecision(10) << v[i];
  out << '\n';
}

}  // namespace

std::string sessions_csv_path(const std::string& out_path) {
  std::filesystem::path p(out_path);
  p.replace_extension(".sessions.csv");
  return p.string();
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = read_file(config_path);
    ExperimentConfig config = parse_experiment_config_text(text);
    if (options.seed) config.base_seed = *options.seed;

    const ExperimentResult result = run_experiment(config, options.threads);

    RunManifest manifest;
    manifest.config_checksum = sha256_hex(text);
    manifest.base_seed = config.base_seed;
    manifest.timestamp = utc_timestamp();

    write_file(out_path, format_json(results_to_json(manifest, config, result)));
    if (options.csv) {
      std::ostringstream csv;
      write_sessions_csv(csv, manifest, result);
      write_file(sessions_csv_path(out_path), csv.str());
    }

    if (!options.quiet) {
      for (const PolicyResult& p : result.policies) {
        out << std::left << std::setw(16) << p.label << std::right;
        if (p.summary.success_rate) out << " success_rate=" << *p.summary.success_rate;
        if (p.summary.survival_median)
          out << " survival_median=" << *p.summary.survival_median
              << " survival_mean=" << *p.summary.survival_mean;
        out << '\n';
      }
      out << "wrote " << out_path << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_anova(const std::string& results_path, const std::string& control_label,
              TableFormat format, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedResults results = load_results(results_path);

    const LoadedPolicy* control = nullptr;
    for (const LoadedPolicy& p : results.policies)
      if (p.label == control_label) control = &p;
    if (!control)
      throw UsageError("control label '" + control_label + "' not found in " + results_path);

    std::vector<stats::SampleGroup> all;
    std::vector<stats::SampleGroup> treatments;
    stats::SampleGroup control_group{control->label, metric_values(results, *control)};
    for (const LoadedPolicy& p : results.policies) {
      all.push_back({p.label, metric_values(results, p)});
      if (&p != control) treatments.push_back(all.back());
    }

    auto rows = stats::pairwise_vs_control(control_group, treatments);
    if (all.size() >= 2) rows.emplace_back("omnibus", stats::one_way_anova(all));

    if (format == TableFormat::csv) {
      out << std::setprecision(17);
      out << "label,f,df1,df2,p,degenerate\n";
      for (const auto& [label, r] : rows)
        out << label << ',' << r.f_statistic << ',' << r.df_between << ',' << r.df_within << ','
            << r.p_value << ',' << (r.degenerate ? "true" : "false") << '\n';
    } else {
      out << std::left << std::setw(18) << "label" << std::right << std::setw(14) << "F"
          << std::setw(6) << "df1" << std::setw(9) << "df2" << std::setw(14) << "p"
          << "  degenerate\n";
      for (const auto& [label, r] : rows) {
        out << std::left << std::setw(18) << label << std::right << std::setw(14)
            << std::setprecision(6) << r.f_statistic << std::setw(6) << r.df_between
            << std::setw(9) << r.df_within << std::setw(14) << std::setprecision(4)
            << r.p_value << "  " << (r.degenerate ? "yes" : "no") << '\n';
      }
    }
    return static_cast<int>(kOk);
  });
}

int cmd_analyze_topreward(const std::vector<double>& thetas, const std::vector<int>& payouts,
                          std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto closed = analysis::top_reward_closed_form(thetas, payouts);
    const auto brute = analysis::top_reward_brute_force(thetas, payouts);
    print_vector(out, "closed_form", closed);
    print_vector(out, "brute_force", brute);
    out << std::left << std::setw(13) << "discrepancy" << std::right << std::setprecision(3)
        << analysis::max_abs_difference(closed, brute) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_histogram(const std::string& results_path, const HistogramSpec& spec,
                  const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedResults results = load_results(results_path);
    const auto rows = compute_histogram(results, spec);
    std::ostringstream csv;
    write_histogram_csv(csv, results.manifest, spec, rows);
    write_file(out_path, csv.str());
    out << "wrote " << rows.size() << " rows to " << out_path << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace rgt::cli
