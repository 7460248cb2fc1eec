#include "caresim/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "caresim/csvio.hpp"
#include "json.hpp"

namespace caresim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("format_double failed");
  return std::string(buf.data(), ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingRuns("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(field);
  return fields;
}

namespace {

AttributeModifier modifier_from_json(const json& j) {
  AttributeModifier mod;
  const std::string attr = j.at("attr").get<std::string>();
  if (attr == "age") mod.attr = AttributeModifier::Attr::Age;
  else if (attr == "ses_index") mod.attr = AttributeModifier::Attr::SesIndex;
  else if (attr == "insurance") mod.attr = AttributeModifier::Attr::Insurance;
  else if (attr == "has_diabetes") mod.attr = AttributeModifier::Attr::HasDiabetes;
  else if (attr == "sex") mod.attr = AttributeModifier::Attr::Sex;
  else if (attr == "race_ethnicity") mod.attr = AttributeModifier::Attr::RaceEthnicity;
  else throw ConfigError("unknown modifier attr '" + attr + "'");

  const std::string op = j.at("op").get<std::string>();
  if (op == "gt") mod.op = AttributeModifier::Op::Gt;
  else if (op == "lt") mod.op = AttributeModifier::Op::Lt;
  else if (op == "eq") mod.op = AttributeModifier::Op::Eq;
  else throw ConfigError("unknown modifier op '" + op + "'");

  if (j.contains("threshold")) mod.threshold = j.at("threshold").get<double>();
  if (j.contains("category")) mod.category = j.at("category").get<std::string>();

  const std::string adjust = j.at("adjust").get<std::string>();
  if (adjust == "mul") mod.adjust = AttributeModifier::Adjust::Multiply;
  else if (adjust == "add") mod.adjust = AttributeModifier::Adjust::Add;
  else throw ConfigError("unknown modifier adjust '" + adjust + "'");

  mod.amount = j.at("amount").get<double>();
  return mod;
}

json modifier_to_json(const AttributeModifier& mod) {
  json j;
  switch (mod.attr) {
    case AttributeModifier::Attr::Age: j["attr"] = "age"; break;
    case AttributeModifier::Attr::SesIndex: j["attr"] = "ses_index"; break;
    case AttributeModifier::Attr::Insurance: j["attr"] = "insurance"; break;
    case AttributeModifier::Attr::HasDiabetes: j["attr"] = "has_diabetes"; break;
    case AttributeModifier::Attr::Sex: j["attr"] = "sex"; break;
    case AttributeModifier::Attr::RaceEthnicity: j["attr"] = "race_ethnicity"; break;
  }
  switch (mod.op) {
    case AttributeModifier::Op::Gt: j["op"] = "gt"; break;
    case AttributeModifier::Op::Lt: j["op"] = "lt"; break;
    case AttributeModifier::Op::Eq: j["op"] = "eq"; break;
  }
  if (!mod.category.empty()) j["category"] = mod.category;
  else j["threshold"] = mod.threshold;
  j["adjust"] = mod.adjust == AttributeModifier::Adjust::Multiply ? "mul" : "add";
  j["amount"] = mod.amount;
  return j;
}

PdfSpec pdf_spec_from_json(const json& j, const std::string& key) {
  PdfSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bernoulli") {
    spec.kind = PdfKind::Bernoulli;
    spec.p = j.at("p").get<double>();
  } else if (kind == "uniform") {
    spec.kind = PdfKind::Uniform;
    spec.lo = j.at("lo").get<double>();
    spec.hi = j.at("hi").get<double>();
  } else if (kind == "categorical") {
    spec.kind = PdfKind::Categorical;
    spec.weights = j.at("weights").get<std::vector<double>>();
  } else {
    throw ConfigError("pdf_overrides." + key + ": unknown kind '" + kind + "'");
  }
  if (j.contains("modifiers"))
    for (const auto& m : j.at("modifiers")) spec.modifiers.push_back(modifier_from_json(m));
  spec.validate();
  return spec;
}

json pdf_spec_to_json(const PdfSpec& spec) {
  json j;
  switch (spec.kind) {
    case PdfKind::Bernoulli:
      j["kind"] = "bernoulli";
      j["p"] = spec.p;
      break;
    case PdfKind::Uniform:
      j["kind"] = "uniform";
      j["lo"] = spec.lo;
      j["hi"] = spec.hi;
      break;
    case PdfKind::Categorical:
      j["kind"] = "categorical";
      j["weights"] = spec.weights;
      break;
  }
  if (!spec.modifiers.empty()) {
    json mods = json::array();
    for (const auto& m : spec.modifiers) mods.push_back(modifier_to_json(m));
    j["modifiers"] = mods;
  }
  return j;
}

json cluster_to_json(const ClusterSpec& spec) {
  json j;
  j["cluster_id"] = spec.cluster_id;
  j["fqhc_count"] = spec.fqhc_count;
  j["age_mean"] = spec.age_mean;
  j["age_sd"] = spec.age_sd;
  j["minority_share"] = spec.minority_share;
  j["ses_mean"] = spec.ses_mean;
  j["ses_sd"] = spec.ses_sd;
  j["insurance_weights"] = spec.insurance_weights;
  j["diabetes_prevalence"] = spec.diabetes_prevalence;
  j["population_served"] = spec.population_served;
  return j;
}

ClusterSpec cluster_from_json(const json& j) {
  ClusterSpec spec;
  spec.cluster_id = j.at("cluster_id").get<int>();
  spec.fqhc_count = j.at("fqhc_count").get<int>();
  spec.age_mean = j.at("age_mean").get<double>();
  spec.age_sd = j.at("age_sd").get<double>();
  spec.minority_share = j.at("minority_share").get<double>();
  spec.ses_mean = j.at("ses_mean").get<double>();
  spec.ses_sd = j.at("ses_sd").get<double>();
  const auto weights = j.at("insurance_weights").get<std::vector<double>>();
  if (weights.size() != 4)
    throw ConfigError("insurance_weights must have 4 entries");
  std::copy(weights.begin(), weights.end(), spec.insurance_weights.begin());
  spec.diabetes_prevalence = j.at("diabetes_prevalence").get<double>();
  spec.population_served = j.at("population_served").get<int>();
  validate(spec);
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs_per_cell < 1) throw ConfigError("runs_per_cell must be >= 1");
  // The baseline always runs, so the scenario set is non-empty even when the
  // trainings list is empty (a baseline-only experiment).
  for (int k : trainings)
    if (k < 1 || k > 5) throw ConfigError("trainings entries must be in 1..5");
  if (population_size < 1) throw ConfigError("population_size must be >= 1");
  if (warmup_days < 0) throw ConfigError("warmup_days must be >= 0");
  if (horizon_days < 1) throw ConfigError("horizon_days must be >= 1");
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (facility.clinician_count < 1) throw ConfigError("facility needs clinicians");
}

void ExperimentConfig::apply_quick_profile() {
  runs_per_cell = 25;
  population_size = 500;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str(), path);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  ExperimentConfig config;
  try {
    if (j.contains("master_seed")) config.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("runs_per_cell")) config.runs_per_cell = j.at("runs_per_cell").get<int>();
    if (j.contains("clusters")) {
      if (j.at("clusters").is_string()) {
        if (j.at("clusters").get<std::string>() != "all")
          throw ConfigError("clusters must be \"all\" or an id array");
      } else {
        config.clusters = j.at("clusters").get<std::vector<int>>();
      }
    }
    if (j.contains("trainings")) config.trainings = j.at("trainings").get<std::vector<int>>();
    if (j.contains("population_size")) config.population_size = j.at("population_size").get<int>();
    if (j.contains("warmup_days")) config.warmup_days = j.at("warmup_days").get<int>();
    if (j.contains("horizon_days")) config.horizon_days = j.at("horizon_days").get<int>();
    if (j.contains("paired_seeds")) config.paired_seeds = j.at("paired_seeds").get<bool>();
    if (j.contains("hours_variant")) {
      const auto variant = j.at("hours_variant").get<std::string>();
      if (variant == "standard") config.hours_variant = HoursVariant::Standard;
      else if (variant == "extended_staggered") config.hours_variant = HoursVariant::ExtendedStaggered;
      else throw ConfigError("unknown hours_variant '" + variant + "'");
    }
    if (j.contains("parallelism")) config.parallelism = j.at("parallelism").get<int>();
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("clusters_csv")) config.clusters_csv = j.at("clusters_csv").get<std::string>();
    if (j.contains("facility")) {
      const auto& f = j.at("facility");
      if (f.contains("clinicians")) config.facility.clinician_count = f.at("clinicians").get<int>();
      if (f.contains("slot_minutes")) config.facility.slot_minutes = f.at("slot_minutes").get<int>();
      if (f.contains("shift_start_hour")) config.facility.shift_start = hours(f.at("shift_start_hour").get<int>());
      if (f.contains("shift_hours")) config.facility.shift_hours = f.at("shift_hours").get<int>();
    }
    if (j.contains("training")) {
      const auto& t = j.at("training");
      if (t.contains("mean_pp")) config.training.mean_pp = t.at("mean_pp").get<double>();
      if (t.contains("ci_low_pp")) config.training.ci_low_pp = t.at("ci_low_pp").get<double>();
      if (t.contains("ci_high_pp")) config.training.ci_high_pp = t.at("ci_high_pp").get<double>();
      if (t.contains("rule")) {
        const auto rule = t.at("rule").get<std::string>();
        if (rule == "uniform") config.training.rule = TrainingEffectParams::DrawRule::UniformOverCi;
        else if (rule == "triangular") config.training.rule = TrainingEffectParams::DrawRule::Triangular;
        else throw ConfigError("unknown training rule '" + rule + "'");
      }
    }
    if (j.contains("pdf_overrides"))
      for (const auto& [key, value] : j.at("pdf_overrides").items())
        config.pdf_overrides[key] = pdf_spec_from_json(value, key);
    if (j.contains("pdf_overrides_baseline"))
      for (const auto& [key, value] : j.at("pdf_overrides_baseline").items())
        config.pdf_overrides_baseline[key] = pdf_spec_from_json(value, key);
    if (j.contains("pdf_overrides_pilot"))
      for (const auto& [key, value] : j.at("pdf_overrides_pilot").items())
        config.pdf_overrides_pilot[key] = pdf_spec_from_json(value, key);
    if (j.contains("trace_samples")) config.trace_samples = j.at("trace_samples").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  config.validate();
  return config;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["master_seed"] = master_seed;
  j["runs_per_cell"] = runs_per_cell;
  if (clusters.empty()) j["clusters"] = "all";
  else j["clusters"] = clusters;
  j["trainings"] = trainings;
  j["population_size"] = population_size;
  j["warmup_days"] = warmup_days;
  j["horizon_days"] = horizon_days;
  j["paired_seeds"] = paired_seeds;
  j["hours_variant"] =
      hours_variant == HoursVariant::Standard ? "standard" : "extended_staggered";
  j["facility"] = {{"clinicians", facility.clinician_count},
                   {"slot_minutes", facility.slot_minutes},
                   {"shift_start_hour", facility.shift_start / kMinutesPerHour},
                   {"shift_hours", facility.shift_hours}};
  j["training"] = {{"mean_pp", training.mean_pp},
                   {"ci_low_pp", training.ci_low_pp},
                   {"ci_high_pp", training.ci_high_pp},
                   {"rule", training.rule == TrainingEffectParams::DrawRule::UniformOverCi
                                ? "uniform"
                                : "triangular"}};
  if (!pdf_overrides.empty()) {
    json overrides;
    for (const auto& [key, spec] : pdf_overrides) overrides[key] = pdf_spec_to_json(spec);
    j["pdf_overrides"] = overrides;
  }
  if (!pdf_overrides_baseline.empty()) {
    json overrides;
    for (const auto& [key, spec] : pdf_overrides_baseline)
      overrides[key] = pdf_spec_to_json(spec);
    j["pdf_overrides_baseline"] = overrides;
  }
  if (!pdf_overrides_pilot.empty()) {
    json overrides;
    for (const auto& [key, spec] : pdf_overrides_pilot)
      overrides[key] = pdf_spec_to_json(spec);
    j["pdf_overrides_pilot"] = overrides;
  }
  if (trace_samples) j["trace_samples"] = true;
  return j.dump(2) + "\n";
}

PdfTable scenario_pdf_table(const ExperimentConfig& config, Arm arm) {
  PdfTable table = default_pdf_table();
  for (const auto& [key, spec] : config.pdf_overrides) table.set(key, spec);
  const auto& arm_overrides = arm == Arm::Baseline ? config.pdf_overrides_baseline
                                                   : config.pdf_overrides_pilot;
  for (const auto& [key, spec] : arm_overrides) table.set(key, spec);
  return table;
}

namespace {

std::vector<ClusterSpec> resolve_clusters(const ExperimentConfig& config) {
  auto specs = config.clusters_csv.empty() ? builtin_cluster_specs()
                                           : load_cluster_csv(config.clusters_csv);
  if (config.clusters.empty()) return specs;
  std::vector<ClusterSpec> chosen;
  for (int id : config.clusters) {
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [id](const ClusterSpec& s) { return s.cluster_id == id; });
    if (it == specs.end())
      throw MissingCluster("config selects unknown cluster " + std::to_string(id));
    chosen.push_back(*it);
  }
  return chosen;
}

ScenarioConfig scenario_for(const ExperimentConfig& config, Arm arm, int k,
                            const PdfTable& table) {
  ScenarioConfig scenario;
  scenario.arm = arm;
  scenario.trainings_k = k;
  scenario.hours_variant = config.hours_variant;
  scenario.pdf_table = table;
  scenario.population_size = config.population_size;
  scenario.warmup_days = config.warmup_days;
  scenario.horizon_days = config.horizon_days;
  scenario.master_seed = config.master_seed;
  scenario.paired_seeds = config.paired_seeds;
  scenario.facility = config.facility;
  scenario.training = config.training;
  return scenario;
}

}  // namespace

std::string runs_csv_text(const std::vector<RunResult>& runs) {
  std::string out =
      "cluster_id,arm,trainings_k,run_index,seed,measure,numerator,denominator,rate\n";
  for (const auto& run : runs) {
    for (Measure m : kAllMeasures) {
      const auto& c = run.cqm[measure_index(m)];
      out += std::to_string(run.cluster_id);
      out += ',';
      out += to_string(run.arm);
      out += ',';
      out += std::to_string(run.trainings_k);
      out += ',';
      out += std::to_string(run.run_index);
      out += ',';
      out += std::to_string(run.seed);
      out += ',';
      out += to_string(m);
      out += ',';
      out += std::to_string(c.numerator);
      out += ',';
      out += std::to_string(c.denominator);
      out += ',';
      out += format_double(c.rate);
      out += '\n';
    }
  }
  return out;
}

std::vector<RunResult> parse_runs_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw MissingRuns("runs.csv is empty");

  std::vector<RunResult> runs;
  std::map<std::tuple<int, int, int, int>, std::size_t> index;  // (cluster, arm, k, run)
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line, ',');
    if (fields.size() != 9)
      throw SchemaError("runs.csv row with " + std::to_string(fields.size()) + " fields");
    const int cluster = std::stoi(fields[0]);
    const Arm arm = arm_from_string(fields[1]);
    const int k = std::stoi(fields[2]);
    const int run_index = std::stoi(fields[3]);
    const auto key = std::make_tuple(cluster, static_cast<int>(arm), k, run_index);

    auto it = index.find(key);
    if (it == index.end()) {
      RunResult run;
      run.cluster_id = cluster;
      run.arm = arm;
      run.trainings_k = k;
      run.run_index = run_index;
      run.seed = std::stoull(fields[4]);
      runs.push_back(run);
      it = index.emplace(key, runs.size() - 1).first;
    }
    auto& run = runs[it->second];
    const Measure m = measure_from_string(fields[5]);
    auto& c = run.cqm[measure_index(m)];
    c.measure = m;
    c.numerator = std::stoi(fields[6]);
    c.denominator = std::stoi(fields[7]);
    c.rate = std::stod(fields[8]);
  }
  if (runs.empty()) throw MissingRuns("runs.csv has no data rows");
  return runs;
}

OutputBundle run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, resolve_clusters(config));
}

OutputBundle run_experiment(const ExperimentConfig& config,
                            std::vector<ClusterSpec> clusters) {
  config.validate();
  if (clusters.empty()) throw MissingCluster("experiment needs at least one cluster");
  for (const auto& spec : clusters) validate(spec);

  OutputBundle bundle;
  bundle.config = config;
  bundle.dir = config.output_dir;
  bundle.clusters = std::move(clusters);

  // Scenario ladder: baseline then ascending training counts.
  std::vector<ScenarioConfig> scenarios;
  scenarios.push_back(scenario_for(config, Arm::Baseline, 0,
                                   scenario_pdf_table(config, Arm::Baseline)));
  const PdfTable pilot_table = scenario_pdf_table(config, Arm::Pilot);
  for (int k : config.trainings)
    scenarios.push_back(scenario_for(config, Arm::Pilot, k, pilot_table));

  struct Job {
    std::size_t cluster_idx;
    std::size_t scenario_idx;
    int run_index;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < bundle.clusters.size(); ++c)
    for (std::size_t s = 0; s < scenarios.size(); ++s)
      for (int r = 0; r < config.runs_per_cell; ++r) jobs.push_back({c, s, r});

  std::vector<RunResult> results(jobs.size());
  std::vector<std::string> samples(config.trace_samples ? jobs.size() : 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  const unsigned workers = config.parallelism > 0
                               ? static_cast<unsigned>(config.parallelism)
                               : std::max(1u, std::thread::hardware_concurrency());

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size() || failed.load()) return;
      const Job& job = jobs[i];
      try {
        const auto& cluster = bundle.clusters[job.cluster_idx];
        const auto& scenario = scenarios[job.scenario_idx];
        auto sim = realize_scenario(scenario, cluster, job.run_index);
        sim->run_measurement_year();

        RunResult run;
        run.cluster_id = cluster.cluster_id;
        run.arm = scenario.arm;
        run.trainings_k = scenario.trainings_k;
        run.run_index = job.run_index;
        run.seed = stream_fingerprint(
            config.master_seed, run_label(scenario, cluster.cluster_id, job.run_index));
        run.cqm = compute_cqm(sim->trace(), sim->population(), sim->measure_start(),
                              sim->measure_end());
        results[i] = run;
        if (config.trace_samples && job.run_index == 0)
          samples[i] = to_trace_text(sim->trace());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failure = e.what();
        failed.store(true);
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw Error("run failed: " + failure);

  bundle.runs = std::move(results);

  fs::create_directories(bundle.dir);
  json manifest;
  manifest["code_version"] = kCodeVersion;
  manifest["master_seed"] = config.master_seed;
  manifest["config"] = json::parse(config.to_json_text());
  json cluster_array = json::array();
  for (const auto& spec : bundle.clusters) cluster_array.push_back(cluster_to_json(spec));
  manifest["clusters"] = cluster_array;
  write_text_file(bundle.dir + "/manifest.json", manifest.dump(2) + "\n");
  write_text_file(bundle.dir + "/runs.csv", runs_csv_text(bundle.runs));

  if (config.trace_samples) {
    fs::create_directories(bundle.dir + "/traces");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (samples[i].empty()) continue;
      const auto& run = bundle.runs[i];
      const std::string name = "cluster" + std::to_string(run.cluster_id) + "_" +
                               std::string(to_string(run.arm)) + "_k" +
                               std::to_string(run.trainings_k) + "_run0.trace";
      write_text_file(bundle.dir + "/traces/" + name, samples[i]);
    }
  }
  return bundle;
}

OutputBundle load_bundle(const std::string& dir) {
  OutputBundle bundle;
  bundle.dir = dir;

  json manifest;
  try {
    manifest = json::parse(read_text_file(dir + "/manifest.json"));
  } catch (const json::parse_error& e) {
    throw ConfigError(dir + "/manifest.json: " + e.what());
  }
  bundle.config =
      ExperimentConfig::from_json_text(manifest.at("config").dump(), dir + "/manifest.json");
  for (const auto& c : manifest.at("clusters"))
    bundle.clusters.push_back(cluster_from_json(c));
  bundle.runs = parse_runs_csv(read_text_file(dir + "/runs.csv"));
  return bundle;
}

std::map<std::pair<Measure, int>, EffectEstimate> national_estimates(
    const OutputBundle& bundle) {
  std::map<std::pair<Measure, int>, EffectEstimate> national;

  for (int k : bundle.config.trainings) {
    for (Measure m : kAllMeasures) {
      std::vector<EffectEstimate> cluster_effects;
      std::vector<double> weights;
      for (const auto& cluster : bundle.clusters) {
        std::vector<RunResult> baseline, pilot;
        for (const auto& run : bundle.runs) {
          if (run.cluster_id != cluster.cluster_id) continue;
          if (run.arm == Arm::Baseline) baseline.push_back(run);
          else if (run.trainings_k == k) pilot.push_back(run);
        }
        cluster_effects.push_back(
            arm_effect(baseline, pilot, m, bundle.config.paired_seeds));
        weights.push_back(static_cast<double>(cluster.fqhc_count));
      }
      national[{m, k}] = weighted_national_estimate(cluster_effects, weights);
    }
  }
  return national;
}

ValidationReport emit_reports(const OutputBundle& bundle) {
  if (bundle.runs.empty()) throw MissingRuns("bundle has no runs");
  bool any_pilot = false;
  for (const auto& run : bundle.runs) any_pilot |= run.arm == Arm::Pilot;
  if (!any_pilot) throw MissingRuns("bundle has no pilot scenarios to compare");

  const auto benchmark = PilotBenchmark::fqhc_apcp();
  const auto national = national_estimates(bundle);

  // effects.csv: per-cluster and national rows.
  std::string effects =
      "measure,trainings_k,scope,mean_pp,se_pp,ci_lo,ci_hi\n";
  for (int k : bundle.config.trainings) {
    for (Measure m : kAllMeasures) {
      for (const auto& cluster : bundle.clusters) {
        std::vector<RunResult> baseline, pilot;
        for (const auto& run : bundle.runs) {
          if (run.cluster_id != cluster.cluster_id) continue;
          if (run.arm == Arm::Baseline) baseline.push_back(run);
          else if (run.trainings_k == k) pilot.push_back(run);
        }
        const auto est = arm_effect(baseline, pilot, m, bundle.config.paired_seeds);
        effects += std::string(to_string(m)) + "," + std::to_string(k) +
                   ",cluster" + std::to_string(cluster.cluster_id) + "," +
                   format_double(est.mean_pp) + "," + format_double(est.se_pp) +
                   "," + format_double(est.ci95.lo) + "," +
                   format_double(est.ci95.hi) + "\n";
      }
      const auto& est = national.at({m, k});
      effects += std::string(to_string(m)) + "," + std::to_string(k) +
                 ",national," + format_double(est.mean_pp) + "," +
                 format_double(est.se_pp) + "," + format_double(est.ci95.lo) +
                 "," + format_double(est.ci95.hi) + "\n";
    }
  }
  write_text_file(bundle.dir + "/effects.csv", effects);

  auto report = validate_against_pilot(national, benchmark, bundle.config.trainings);
  report.anova = weighted_anova(bundle.runs, bundle.clusters);

  // validation.json
  json doc;
  doc["code_version"] = kCodeVersion;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"measure", std::string(to_string(row.measure))},
                    {"pilot_year", row.pilot_year},
                    {"trainings_k", row.trainings_k},
                    {"sim_mean_pp", row.sim_mean_pp},
                    {"sim_ci", {row.sim_ci.lo, row.sim_ci.hi}},
                    {"pilot_mean_pp", row.pilot_mean_pp},
                    {"pilot_ci", {row.pilot_ci.lo, row.pilot_ci.hi}},
                    {"overlap", row.overlap}});
  }
  doc["validation"] = rows;
  json anova = json::array();
  for (const auto& table : report.anova) {
    json t;
    t["measure"] = std::string(to_string(table.measure));
    t["df_residual"] = table.df_residual;
    t["sigma2"] = table.sigma2;
    json terms = json::array();
    for (const auto& row : table.rows)
      terms.push_back({{"term", row.term},
                       {"coef", row.coef},
                       {"se", row.se},
                       {"t", row.t_stat},
                       {"p", row.p_value},
                       {"significant", row.significant}});
    t["terms"] = terms;
    anova.push_back(t);
  }
  doc["anova"] = anova;
  write_text_file(bundle.dir + "/validation.json", doc.dump(2) + "\n");

  // plotdata/<measure>.csv: simulated effect vs k with the pilot bands.
  fs::create_directories(bundle.dir + "/plotdata");
  for (Measure m : kAllMeasures) {
    std::string plot =
        "measure,k,mean_pp,lo,hi,pilot_year,pilot_lo,pilot_hi\n";
    for (int k : bundle.config.trainings) {
      const auto& est = national.at({m, k});
      for (int year = 1; year <= 3; ++year) {
        const auto pilot_ci = benchmark.cell(m, year).ci95();
        plot += std::string(to_string(m)) + "," + std::to_string(k) + "," +
                format_double(est.mean_pp) + "," + format_double(est.ci95.lo) +
                "," + format_double(est.ci95.hi) + "," + std::to_string(year) +
                "," + format_double(pilot_ci.lo) + "," +
                format_double(pilot_ci.hi) + "\n";
      }
    }
    write_text_file(bundle.dir + "/plotdata/" + std::string(to_string(m)) + ".csv",
                    plot);
  }

  return report;
}

}  // namespace caresim
