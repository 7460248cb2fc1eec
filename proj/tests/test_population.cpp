#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "caresim/cluster.hpp"
#include "caresim/population.hpp"
#include "doctest.h"

using namespace caresim;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("builtin cluster specs carry the published weights") {
  const auto specs = builtin_cluster_specs();
  REQUIRE(specs.size() == 4);
  CHECK(specs[0].fqhc_count == 399);
  CHECK(specs[1].fqhc_count == 274);
  CHECK(specs[2].fqhc_count == 69);
  CHECK(specs[3].fqhc_count == 456);
  int total = 0;
  for (const auto& s : specs) total += s.fqhc_count;
  CHECK(total == 1198);
}

TEST_CASE("builtin cluster specs respect the ordinal descriptions") {
  const auto specs = builtin_cluster_specs();
  // cluster 1 older than cluster 4
  CHECK(specs[0].age_mean > specs[3].age_mean);
  // cluster 3 has the higher diabetes prevalence
  CHECK(specs[2].diabetes_prevalence > specs[0].diabetes_prevalence);
  // cluster 2 has the highest uninsured share
  for (int i : {0, 2, 3})
    CHECK(specs[1].insurance_weights[2] > specs[i].insurance_weights[2]);
  // cluster 4 has the highest Medicaid share
  for (int i : {0, 1, 2})
    CHECK(specs[3].insurance_weights[3] > specs[i].insurance_weights[3]);
}

TEST_CASE("generate_population: n = 0 gives an empty list") {
  auto stream = derive_stream(1, "pop-empty");
  const auto specs = builtin_cluster_specs();
  CHECK(generate_population(specs[0], 0, stream).empty());
}

TEST_CASE("generate_population: deterministic under the same stream") {
  const auto specs = builtin_cluster_specs();
  auto s1 = derive_stream(11, "pop-det");
  auto s2 = derive_stream(11, "pop-det");
  const auto a = generate_population(specs[1], 200, s1);
  const auto b = generate_population(specs[1], 200, s2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].age == b[i].age);
    CHECK(a[i].insurance == b[i].insurance);
    CHECK(a[i].has_diabetes == b[i].has_diabetes);
    CHECK(a[i].wellness_due == b[i].wellness_due);
  }
}

TEST_CASE("generate_population: attribute marginals match the spec") {
  const auto specs = builtin_cluster_specs();
  auto stream = derive_stream(23, "pop-marginals");
  const int n = 10000;
  const auto patients = generate_population(specs[1], n, stream);

  int uninsured = 0, diabetic = 0, minority = 0;
  for (const auto& p : patients) {
    if (p.insurance == Insurance::Uninsured) ++uninsured;
    if (p.has_diabetes) ++diabetic;
    if (p.race_ethnicity == RaceEthnicity::Minority) ++minority;
    CHECK(p.age >= 18.0);
    CHECK(p.ses_index >= 0.0);
    CHECK(p.ses_index <= 1.0);
  }

  // Cluster 2 uninsured share within +-0.02 of the configured weight.
  CHECK(std::abs(uninsured / double(n) - specs[1].insurance_weights[2]) < 0.02);

  // 3-sigma binomial bounds for the other marginals.
  auto within3 = [n](int count, double p) {
    return std::abs(count - n * p) < 3.0 * std::sqrt(n * p * (1 - p)) + 1.0;
  };
  CHECK(within3(diabetic, specs[1].diabetes_prevalence));
  CHECK(within3(minority, specs[1].minority_share));
}

TEST_CASE("generate_population: wellness due dates stagger across the year") {
  const auto specs = builtin_cluster_specs();
  auto stream = derive_stream(31, "pop-stagger");
  const auto patients = generate_population(specs[0], 5000, stream);
  std::set<SimTime> dues;
  for (const auto& p : patients) {
    CHECK(p.wellness_due >= 0);
    CHECK(p.wellness_due < days(365));
    dues.insert(p.wellness_due);
  }
  CHECK(dues.size() > 300);  // spread over the year, not piled on one day
}

TEST_CASE("generate_population: malformed weights rejected") {
  auto spec = builtin_cluster_specs()[0];
  spec.insurance_weights = {0.5, 0.5, 0.5, 0.5};
  auto stream = derive_stream(1, "pop-bad");
  CHECK_THROWS_AS(generate_population(spec, 10, stream), InvalidSpec);
}

TEST_CASE("build_facility: round-robin panels balance") {
  const auto specs = builtin_cluster_specs();
  auto stream = derive_stream(3, "facility");

  SUBCASE("10 patients over 2 clinicians") {
    auto pop_stream = derive_stream(3, "facility-pop");
    auto patients = generate_population(specs[0], 10, pop_stream);
    FacilityConfig config;
    config.clinician_count = 2;
    const auto facility = build_facility(specs[0], config, patients, stream);
    std::array<int, 2> panel{};
    for (const auto& p : patients) panel[p.assigned_clinician]++;
    CHECK(panel[0] == 5);
    CHECK(panel[1] == 5);
    CHECK(facility.registry_enabled);
  }

  SUBCASE("7 patients over 3 clinicians") {
    auto pop_stream = derive_stream(4, "facility-pop");
    auto patients = generate_population(specs[0], 7, pop_stream);
    FacilityConfig config;
    config.clinician_count = 3;
    build_facility(specs[0], config, patients, stream);
    std::array<int, 3> panel{};
    for (const auto& p : patients) panel[p.assigned_clinician]++;
    std::sort(panel.begin(), panel.end());
    CHECK(panel[0] == 2);
    CHECK(panel[1] == 2);
    CHECK(panel[2] == 3);
  }

  SUBCASE("no clinicians is an error") {
    auto pop_stream = derive_stream(5, "facility-pop");
    auto patients = generate_population(specs[0], 3, pop_stream);
    FacilityConfig config;
    config.clinician_count = 0;
    CHECK_THROWS_AS(build_facility(specs[0], config, patients, stream), NoClinicians);
  }
}

TEST_CASE("appointment book: slots stay on the grid inside shifts") {
  ClinicianProfile clin;
  clin.shift_start = hours(8);
  clin.shift_end = hours(16);
  clin.slot_minutes = 15;
  AppointmentBook book(clin);

  // Day 0 is a Monday. A request at 03:00 books the 08:00 slot.
  CHECK(book.book(hours(3)) == hours(8));
  // Next request rolls to the next slot.
  CHECK(book.book(hours(3)) == hours(8) + 15);
  // A request mid-slot rounds up onto the grid.
  const SimTime grant = book.book(hours(9) + 7);
  CHECK(grant == hours(9) + 15);
  // A request after close moves to the next working day.
  const SimTime late = book.book(hours(16));
  CHECK(late == days(1) + hours(8));
}

TEST_CASE("appointment book: weekends are skipped") {
  ClinicianProfile clin;
  AppointmentBook book(clin);
  // Day 5 is Saturday; first slot lands on Monday (day 7).
  CHECK(book.book(days(5)) == days(7) + hours(8));
}

TEST_CASE("cluster csv: round-trips the builtins") {
  const auto specs = builtin_cluster_specs();
  const auto path = write_temp("caresim_clusters_roundtrip.csv", cluster_csv_text(specs));
  const auto loaded = load_cluster_csv(path);
  REQUIRE(loaded.size() == specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(loaded[i].cluster_id == specs[i].cluster_id);
    CHECK(loaded[i].fqhc_count == specs[i].fqhc_count);
    CHECK(loaded[i].age_mean == doctest::Approx(specs[i].age_mean));
    CHECK(loaded[i].diabetes_prevalence ==
          doctest::Approx(specs[i].diabetes_prevalence));
    for (int j = 0; j < 4; ++j)
      CHECK(loaded[i].insurance_weights[j] ==
            doctest::Approx(specs[i].insurance_weights[j]));
  }
  std::remove(path.c_str());
}

TEST_CASE("cluster csv: missing weight column is a schema error") {
  const std::string text =
      "cluster_id,age_mean,age_sd,minority_share,ses_mean,ses_sd,"
      "ins_continuous,ins_intermittent,ins_uninsured,ins_medicaid,"
      "diabetes_prevalence,population_served\n"
      "1,60,10,0.2,0.5,0.1,0.55,0.2,0.08,0.17,0.2,10000\n";
  const auto path = write_temp("caresim_clusters_noweight.csv", text);
  CHECK_THROWS_WITH_AS(load_cluster_csv(path),
                       doctest::Contains("fqhc_count"), SchemaError);
  std::remove(path.c_str());
}

TEST_CASE("cluster csv: five clusters are accepted") {
  auto specs = builtin_cluster_specs();
  auto extra = specs[0];
  extra.cluster_id = 5;
  extra.fqhc_count = 10;
  specs.push_back(extra);
  const auto path = write_temp("caresim_clusters_five.csv", cluster_csv_text(specs));
  const auto loaded = load_cluster_csv(path);
  CHECK(loaded.size() == 5);
  CHECK(loaded[4].cluster_id == 5);
  std::remove(path.c_str());
}
