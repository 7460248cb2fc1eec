#include "caresim/cluster.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace caresim {

namespace {

constexpr const char* kCsvHeader =
    "cluster_id,fqhc_count,age_mean,age_sd,minority_share,ses_mean,ses_sd,"
    "ins_continuous,ins_intermittent,ins_uninsured,ins_medicaid,"
    "diabetes_prevalence,population_served";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& column, int row) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw SchemaError("row " + std::to_string(row) + ", column '" + column +
                      "': cannot parse '" + text + "'");
  }
}

}  // namespace

void validate(const ClusterSpec& spec) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (spec.fqhc_count <= 0) throw InvalidSpec("fqhc_count must be positive");
  if (spec.age_mean <= 0.0 || spec.age_sd < 0.0)
    throw InvalidSpec("age distribution parameters malformed");
  if (!in_unit(spec.minority_share))
    throw InvalidSpec("minority_share outside [0,1]");
  if (!in_unit(spec.ses_mean) || spec.ses_sd < 0.0)
    throw InvalidSpec("ses distribution parameters malformed");
  double total = 0.0;
  for (double w : spec.insurance_weights) {
    if (w < 0.0) throw InvalidSpec("negative insurance weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidSpec("insurance weights must sum to 1, got " + std::to_string(total));
  if (!in_unit(spec.diabetes_prevalence))
    throw InvalidSpec("diabetes_prevalence outside [0,1]");
}

std::vector<ClusterSpec> builtin_cluster_specs() {
  // Ordinal contract: cluster 1 oldest, cluster 4 youngest; cluster 3 highest
  // diabetes prevalence; cluster 2 highest uninsured share; cluster 4 highest
  // Medicaid share; clusters 3 and 4 serve large populations.
  std::vector<ClusterSpec> specs(4);

  specs[0] = ClusterSpec{
      .cluster_id = 1,
      .fqhc_count = 399,
      .age_mean = 62.0,
      .age_sd = 12.0,
      .minority_share = 0.15,
      .ses_mean = 0.62,
      .ses_sd = 0.15,
      .insurance_weights = {0.55, 0.20, 0.08, 0.17},
      .diabetes_prevalence = 0.21,
      .population_served = 12000,
  };
  specs[1] = ClusterSpec{
      .cluster_id = 2,
      .fqhc_count = 274,
      .age_mean = 44.0,
      .age_sd = 14.0,
      .minority_share = 0.68,
      .ses_mean = 0.30,
      .ses_sd = 0.13,
      .insurance_weights = {0.20, 0.13, 0.37, 0.30},
      .diabetes_prevalence = 0.24,
      .population_served = 4000,
  };
  specs[2] = ClusterSpec{
      .cluster_id = 3,
      .fqhc_count = 69,
      .age_mean = 53.0,
      .age_sd = 13.0,
      .minority_share = 0.50,
      .ses_mean = 0.27,
      .ses_sd = 0.12,
      .insurance_weights = {0.25, 0.15, 0.24, 0.36},
      .diabetes_prevalence = 0.30,
      .population_served = 42000,
  };
  specs[3] = ClusterSpec{
      .cluster_id = 4,
      .fqhc_count = 456,
      .age_mean = 35.0,
      .age_sd = 11.0,
      .minority_share = 0.70,
      .ses_mean = 0.34,
      .ses_sd = 0.13,
      .insurance_weights = {0.20, 0.12, 0.20, 0.48},
      .diabetes_prevalence = 0.17,
      .population_served = 38000,
  };
  for (const auto& spec : specs) validate(spec);
  return specs;
}

std::vector<ClusterSpec> load_cluster_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open cluster file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw SchemaError("empty cluster file: " + path);
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const auto expected = split_csv_line(kCsvHeader);
  const auto got = split_csv_line(header);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= got.size() || got[i] != expected[i])
      throw SchemaError("header column " + std::to_string(i + 1) +
                        ": expected '" + expected[i] + "', got '" +
                        (i < got.size() ? got[i] : std::string("<missing>")) + "'");
  }
  if (got.size() != expected.size())
    throw SchemaError("unexpected extra header column '" + got[expected.size()] + "'");

  std::vector<ClusterSpec> specs;
  std::string line;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected.size())
      throw SchemaError("row " + std::to_string(row) + ": expected " +
                        std::to_string(expected.size()) + " fields, got " +
                        std::to_string(fields.size()));
    ClusterSpec spec;
    spec.cluster_id = static_cast<int>(parse_double(fields[0], expected[0], row));
    spec.fqhc_count = static_cast<int>(parse_double(fields[1], expected[1], row));
    spec.age_mean = parse_double(fields[2], expected[2], row);
    spec.age_sd = parse_double(fields[3], expected[3], row);
    spec.minority_share = parse_double(fields[4], expected[4], row);
    spec.ses_mean = parse_double(fields[5], expected[5], row);
    spec.ses_sd = parse_double(fields[6], expected[6], row);
    for (int i = 0; i < 4; ++i)
      spec.insurance_weights[i] = parse_double(fields[7 + i], expected[7 + i], row);
    spec.diabetes_prevalence = parse_double(fields[11], expected[11], row);
    spec.population_served = static_cast<int>(parse_double(fields[12], expected[12], row));
    validate(spec);
    specs.push_back(spec);
  }
  if (specs.empty()) throw SchemaError("cluster file has no data rows: " + path);
  return specs;
}

std::string cluster_csv_text(const std::vector<ClusterSpec>& specs) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& s : specs) {
    out << s.cluster_id << ',' << s.fqhc_count << ',' << s.age_mean << ','
        << s.age_sd << ',' << s.minority_share << ',' << s.ses_mean << ','
        << s.ses_sd << ',' << s.insurance_weights[0] << ','
        << s.insurance_weights[1] << ',' << s.insurance_weights[2] << ','
        << s.insurance_weights[3] << ',' << s.diabetes_prevalence << ','
        << s.population_served << '\n';
  }
  return out.str();
}

}  // namespace caresim
