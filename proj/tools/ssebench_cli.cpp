#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssebench/config.hpp"
#include "ssebench/error.hpp"
#include "ssebench/experiment.hpp"

using namespace ssebench;

namespace {

void print_summary(const RunReport& report, const std::string& label = "") {
  if (report.setup_error) {
    std::fprintf(stderr, "%ssetup failed: %s\n", label.c_str(), report.setup_error->c_str());
    return;
  }
  for (const auto& t : report.trials) {
    if (!t.ok()) std::fprintf(stderr, "%s\n", t.error->c_str());
  }
  const auto& a = report.aggregate;
  std::printf("%strials %zu/%zu  accuracy %.4f (sd %.4f)  accuracy_unique %.4f  recovery %.4f  storage x%.3f  comm x%.3f\n",
              label.c_str(), a.succeeded, report.trials.size(), a.accuracy.mean, a.accuracy.stddev, a.accuracy_unique.mean,
              a.recovery_rate.mean, a.storage_overhead.mean, a.communication_overhead.mean);
}

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSE leakage workbench: simulate leakage, apply countermeasures, run query-recovery attacks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t trials = 0;

  auto* run = app.add_subcommand("run", "Run an experiment and write report.json / metrics.csv");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--trials", trials, "Trial count override")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per value of a config key");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Dotted config key, e.g. defense.k or tau")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  sweep->add_option("--trials", trials, "Trial count override")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig config = load_config(config_path);
    if (trials > 0) config.trials = trials;
    if (!out_dir.empty()) config.output_dir = out_dir;

    if (*validate) {
      validate_config(config);
      std::printf("ok: %zu trial(s), attack %s, defense %s\n", config.trials, to_string(config.attack).c_str(),
                  to_string(config.defense.kind).c_str());
      return 0;
    }

    if (*run) {
      const RunReport report = run_experiment(config);
      emit_reports(report, config.output_dir);
      print_summary(report);
      return report.ok() ? 0 : 1;
    }

    const auto list = split_values(values);
    if (list.empty()) throw Error("--values is empty");
    std::ostringstream table;
    table << "value,succeeded,accuracy_mean,accuracy_stddev,accuracy_unique_mean,recovery_rate_mean,"
             "storage_overhead_mean,communication_overhead_mean\n";
    bool all_ok = true;
    for (const auto& value : list) {
      ExperimentConfig point = with_override(config, param, value);
      point.output_dir = config.output_dir / (param + "=" + value);
      const RunReport report = run_experiment(point);
      emit_reports(report, point.output_dir);
      print_summary(report, param + "=" + value + "  ");
      all_ok = all_ok && report.ok();
      const auto& a = report.aggregate;
      char line[512];
      std::snprintf(line, sizeof line, ",%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", a.succeeded, a.accuracy.mean,
                    a.accuracy.stddev, a.accuracy_unique.mean, a.recovery_rate.mean, a.storage_overhead.mean,
                    a.communication_overhead.mean);
      table << csv_cell(value) << line;
    }
    const auto sweep_csv = config.output_dir / "sweep.csv";
    std::ofstream(sweep_csv) << table.str();
    return all_ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
