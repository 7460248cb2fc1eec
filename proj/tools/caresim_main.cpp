// Command-line front end: farm simulation runs from an experiment config,
// then report effects and validate them against the pilot benchmarks.
//
//   caresim run <config.json> [--quick] [--seed N] [--parallelism N]
//                             [--clusters-csv file] [--output dir]
//   caresim report <bundle-dir>
//   caresim validate <bundle-dir>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "caresim/experiment.hpp"

namespace {

using namespace caresim;

void print_validation_summary(const ValidationReport& report) {
  int overlaps = 0;
  for (const auto& row : report.rows)
    if (row.overlap) ++overlaps;
  std::printf("validation grid: %zu rows, %d overlapping\n", report.rows.size(),
              overlaps);
  for (const auto& row : report.rows) {
    std::printf(
        "  %-12s year%-2d k=%d sim %6.2f [%6.2f, %6.2f]  pilot %5.2f [%6.2f, %6.2f]  %s\n",
        std::string(to_string(row.measure)).c_str(), row.pilot_year,
        row.trainings_k, row.sim_mean_pp, row.sim_ci.lo, row.sim_ci.hi,
        row.pilot_mean_pp, row.pilot_ci.lo, row.pilot_ci.hi,
        row.overlap ? "overlap" : "-");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primary-care episode simulator and scenario comparison harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string bundle_dir;
  std::string clusters_csv;
  std::string output_dir;
  bool quick = false;
  std::uint64_t seed = 0;
  int parallelism = -1;

  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_flag("--quick", quick, "desk-scale profile: 25 runs/cell, 500 patients");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override master_seed");
  run_cmd->add_option("--parallelism", parallelism, "worker threads (0 = hardware)");
  run_cmd->add_option("--clusters-csv", clusters_csv, "cluster spec file replacing built-ins");
  run_cmd->add_option("--output", output_dir, "output bundle directory");

  auto* report_cmd = app.add_subcommand("report", "emit effects and plot data for a bundle");
  report_cmd->add_option("bundle", bundle_dir, "bundle directory")->required();

  auto* validate_cmd =
      app.add_subcommand("validate", "print the CI-overlap validation grid");
  validate_cmd->add_option("bundle", bundle_dir, "bundle directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = ExperimentConfig::from_json_file(config_path);
      if (quick) config.apply_quick_profile();
      if (seed_opt->count() > 0) config.master_seed = seed;
      if (parallelism >= 0) config.parallelism = parallelism;
      if (!clusters_csv.empty()) config.clusters_csv = clusters_csv;
      if (!output_dir.empty()) config.output_dir = output_dir;

      const auto bundle = run_experiment(config);
      std::printf("ran %zu runs into %s\n", bundle.runs.size(), bundle.dir.c_str());
      const auto report = emit_reports(bundle);
      print_validation_summary(report);
    } else if (report_cmd->parsed()) {
      const auto bundle = load_bundle(bundle_dir);
      emit_reports(bundle);
      std::printf("wrote %s/effects.csv, validation.json, plotdata/\n",
                  bundle.dir.c_str());
    } else if (validate_cmd->parsed()) {
      const auto bundle = load_bundle(bundle_dir);
      const auto report = emit_reports(bundle);
      print_validation_summary(report);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
