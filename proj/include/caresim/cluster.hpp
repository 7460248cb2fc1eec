#pragma once

#include <array>
#include <string>
#include <vector>

#include "caresim/errors.hpp"

namespace caresim {

// One FQHC archetype: attribute-distribution parameters for the population it
// serves plus the number of centers it stands for nationally. The four
// built-ins are calibration defaults that respect the published ordinal
// cluster descriptions (which archetype is older, poorer, more diverse);
// the numeric distributions themselves are editable inputs, not ground truth.
struct ClusterSpec {
  int cluster_id = 0;
  int fqhc_count = 0;  // national aggregation weight

  double age_mean = 0.0;
  double age_sd = 0.0;
  double minority_share = 0.0;
  double ses_mean = 0.0;  // socioeconomic index in [0, 1]
  double ses_sd = 0.0;
  // {continuous, intermittent, uninsured, medicaid}; must sum to 1
  std::array<double, 4> insurance_weights{};
  double diabetes_prevalence = 0.0;
  int population_served = 0;
};

// Throws InvalidSpec when probability parameters are malformed.
void validate(const ClusterSpec& spec);

// The four built-in archetypes with weights (399, 274, 69, 456), sum 1198.
std::vector<ClusterSpec> builtin_cluster_specs();

// CSV with header:
//   cluster_id,fqhc_count,age_mean,age_sd,minority_share,ses_mean,ses_sd,
//   ins_continuous,ins_intermittent,ins_uninsured,ins_medicaid,
//   diabetes_prevalence,population_served
// Any number of clusters >= 1 is accepted; downstream analysis generalizes
// the national weighting to n clusters. Throws SchemaError naming the
// offending column, InvalidSpec for bad values.
std::vector<ClusterSpec> load_cluster_csv(const std::string& path);

std::string cluster_csv_text(const std::vector<ClusterSpec>& specs);

}  // namespace caresim
