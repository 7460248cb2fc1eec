#pragma once

#include <map>
#include <string>
#include <vector>

#include "caresim/analysis.hpp"
#include "caresim/benchmark.hpp"
#include "caresim/cluster.hpp"
#include "caresim/intervention.hpp"

namespace caresim {

inline constexpr const char* kCodeVersion = "0.1.0";

// One experiment file materializes all arms: the baseline plus one pilot
// scenario per training count.
struct ExperimentConfig {
  std::uint64_t master_seed = 20110901;
  int runs_per_cell = 200;
  std::vector<int> clusters;            // empty = all available clusters
  std::vector<int> trainings = {1, 2, 3, 4, 5};
  int population_size = 2000;
  int warmup_days = 30;
  int horizon_days = 365;
  bool paired_seeds = true;
  HoursVariant hours_variant = HoursVariant::Standard;
  int parallelism = 0;                  // 0 = hardware concurrency
  std::string output_dir = "out";
  std::string clusters_csv;             // optional replacement for built-ins
  FacilityConfig facility;
  TrainingEffectParams training;
  std::map<std::string, PdfSpec> pdf_overrides;           // both arms
  std::map<std::string, PdfSpec> pdf_overrides_baseline;  // baseline arm only
  std::map<std::string, PdfSpec> pdf_overrides_pilot;     // pilot arm only
  bool trace_samples = false;  // export one trace per cell (run 0)

  void validate() const;                // throws ConfigError

  // CI-scale profile: 25 runs per cell over 500 patients.
  void apply_quick_profile();

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::string& origin);
  std::string to_json_text() const;     // semantic fields only (no parallelism)
};

struct OutputBundle {
  std::string dir;
  ExperimentConfig config;
  std::vector<ClusterSpec> clusters;
  std::vector<RunResult> runs;
};

// Builds the scenario PdfTable: defaults, then shared overrides, then the
// arm-specific overrides.
PdfTable scenario_pdf_table(const ExperimentConfig& config, Arm arm);

// Executes every (cluster x scenario x replicate) cell on a worker pool and
// writes manifest.json and runs.csv under config.output_dir. Results are
// merged in deterministic cell order, so output bytes do not depend on the
// worker count.
OutputBundle run_experiment(const ExperimentConfig& config);

// Same, with the cluster specs already resolved. A bundle's manifest holds
// (config, clusters), so this overload re-runs a manifest bit-exactly.
OutputBundle run_experiment(const ExperimentConfig& config,
                            std::vector<ClusterSpec> clusters);

// Reads manifest.json + runs.csv back; throws MissingRuns when absent.
OutputBundle load_bundle(const std::string& dir);

// Effects per (cluster, measure, k) and nationally, the weighted ANOVA, and
// the 60-row validation grid against the pilot benchmarks. Writes
// effects.csv, validation.json and plotdata/<measure>.csv into bundle.dir.
ValidationReport emit_reports(const OutputBundle& bundle);

// In-memory variants used by the report writers and tests.
std::map<std::pair<Measure, int>, EffectEstimate> national_estimates(
    const OutputBundle& bundle);
std::string runs_csv_text(const std::vector<RunResult>& runs);
std::vector<RunResult> parse_runs_csv(const std::string& text);

}  // namespace caresim
