#include <algorithm>
#include <cmath>
#include <set>

#include "caresim/analysis.hpp"
#include "caresim/intervention.hpp"
#include "caresim/pathway.hpp"
#include "doctest.h"

using namespace caresim;

namespace {

PatientProfile test_patient(bool diabetic = true) {
  PatientProfile p;
  p.id = 0;
  p.age = 50;
  p.ses_index = 0.5;
  p.insurance = Insurance::Continuous;
  p.has_diabetes = diabetic;
  p.assigned_clinician = 0;
  p.wellness_due = days(400);  // far out so prompts don't fire by default
  return p;
}

ScenarioConfig small_scenario(Arm arm, int k, std::uint64_t seed = 99) {
  ScenarioConfig config;
  config.arm = arm;
  config.trainings_k = k;
  config.population_size = 300;
  config.warmup_days = 10;
  config.master_seed = seed;
  config.facility.clinician_count = 2;
  return config;
}

std::string population_text(const std::vector<PatientProfile>& patients) {
  std::string out;
  for (const auto& p : patients) {
    out += std::to_string(p.id) + "," + std::to_string(p.age) + "," +
           std::to_string(static_cast<int>(p.sex)) + "," +
           std::to_string(static_cast<int>(p.race_ethnicity)) + "," +
           std::to_string(p.ses_index) + "," +
           std::string(to_string(p.insurance)) + "," +
           std::to_string(p.has_diabetes) + "," +
           std::to_string(p.wellness_due) + ";";
  }
  return out;
}

}  // namespace

TEST_CASE("daily prompts: non-diabetic patients never get symptom prompts") {
  const auto table = default_pdf_table();
  auto patient = test_patient(false);
  auto stream = derive_stream(1, "prompts-gate");
  int symptom = 0;
  for (int day = 0; day < 2000; ++day) {
    for (const auto& ev : daily_entry_prompts(patient, days(day), table, stream))
      if (ev.kind == EventKind::SymptomPrompt) ++symptom;
  }
  CHECK(symptom == 0);
}

TEST_CASE("daily prompts: zero hazard means zero sick prompts") {
  auto table = default_pdf_table();
  table.set(pdf_keys::kSickPrompt, PdfSpec::bernoulli(0.0));
  table.set(pdf_keys::kSymptomPrompt, PdfSpec::bernoulli(0.0));
  auto patient = test_patient(true);
  auto stream = derive_stream(2, "prompts-zero");
  for (int day = 0; day < 1000; ++day)
    for (const auto& ev : daily_entry_prompts(patient, days(day), table, stream)) {
      CHECK(ev.kind != EventKind::SickPrompt);
      CHECK(ev.kind != EventKind::SymptomPrompt);
    }
}

TEST_CASE("daily prompts: wellness fires at and after the due date") {
  const auto table = default_pdf_table();
  auto patient = test_patient(true);
  patient.sick_hazard_mult = 0;
  patient.symptom_hazard_mult = 0;
  patient.wellness_due = days(10);
  auto stream = derive_stream(3, "prompts-wellness");
  CHECK(daily_entry_prompts(patient, days(9), table, stream).empty());
  auto at_due = daily_entry_prompts(patient, days(10), table, stream);
  REQUIRE(at_due.size() == 1);
  CHECK(at_due[0].kind == EventKind::WellnessPrompt);
  CHECK(daily_entry_prompts(patient, days(10), table, stream, true).empty());
}

TEST_CASE("daily prompts: sick prompt count is binomial") {
  auto table = default_pdf_table();
  table.set(pdf_keys::kSickPrompt, PdfSpec::bernoulli(0.01));
  table.set(pdf_keys::kSymptomPrompt, PdfSpec::bernoulli(0.0));
  auto stream = derive_stream(4, "prompts-binomial");

  // 10^4 patient-years at hazard 0.01/day.
  const int patients = 10000, horizon = 365;
  long long prompts = 0;
  auto patient = test_patient(false);
  patient.sick_hazard_mult = 1.0;
  const auto hazards = daily_hazards(patient, table);
  for (int i = 0; i < patients; ++i)
    for (int day = 0; day < horizon; ++day)
      prompts += daily_entry_prompts_with(patient, days(day), hazards, stream).size();

  const double n = static_cast<double>(patients) * horizon;
  const double expected = n * 0.01;
  const double sigma = std::sqrt(n * 0.01 * 0.99);
  CHECK(std::abs(prompts - expected) < 3.0 * sigma);
}

TEST_CASE("request_appointment: open book grants a same-or-next-day slot") {
  const auto specs = builtin_cluster_specs();
  auto pop_stream = derive_stream(5, "req-pop");
  auto patients = generate_population(specs[0], 4, pop_stream);
  FacilityConfig fc;
  fc.clinician_count = 2;
  auto fac_stream = derive_stream(5, "req-fac");
  auto facility = build_facility(specs[0], fc, patients, fac_stream);

  const SimTime at = hours(9);  // Monday 09:00
  const auto appt =
      request_appointment(patients[0], VisitReason::SickVisit, at, facility, days(30));
  REQUIRE(appt.has_value());
  CHECK(appt->slot_start >= at);
  CHECK(appt->slot_start < days(2));
  CHECK(appt->clinician == patients[0].assigned_clinician);
  CHECK(appt->duration == 15);
}

TEST_CASE("request_appointment: saturated book balks") {
  const auto specs = builtin_cluster_specs();
  auto pop_stream = derive_stream(6, "balk-pop");
  auto patients = generate_population(specs[0], 2, pop_stream);
  FacilityConfig fc;
  fc.clinician_count = 1;
  auto fac_stream = derive_stream(6, "balk-fac");
  auto facility = build_facility(specs[0], fc, patients, fac_stream);

  // Fill more than a 5-day window's worth of slots: 32 slots/day.
  const SimTime window = days(5);
  for (int i = 0; i < 32 * 8; ++i)
    facility.appointment_book[0].book(0);
  const auto appt =
      request_appointment(patients[0], VisitReason::SickVisit, 0, facility, window);
  CHECK_FALSE(appt.has_value());
}

TEST_CASE("request_appointment: slot assignments match a naive replay oracle") {
  const auto specs = builtin_cluster_specs();
  auto pop_stream = derive_stream(7, "oracle-pop");
  auto patients = generate_population(specs[0], 1, pop_stream);
  FacilityConfig fc;
  fc.clinician_count = 1;
  auto fac_stream = derive_stream(7, "oracle-fac");
  auto facility = build_facility(specs[0], fc, patients, fac_stream);
  const auto& clin = facility.clinicians[0];

  auto stream = derive_stream(7, "oracle-times");
  std::vector<SimTime> request_times;
  SimTime t = 0;
  for (int i = 0; i < 150; ++i) {
    t += stream.uniform_int(0, hours(6));
    request_times.push_back(t);
  }

  std::vector<SimTime> grants;
  for (SimTime at : request_times)
    grants.push_back(facility.appointment_book[0].book(at));

  // Minute-stepping oracle: walk forward from max(at, previous grant + slot)
  // until a grid-aligned slot inside the shift on a weekday.
  std::vector<SimTime> oracle;
  SimTime last_end = 0;
  for (SimTime at : request_times) {
    SimTime cand = std::max(at, last_end);
    for (;; ++cand) {
      if (!is_weekday(cand)) continue;
      const SimTime mod = minute_of_day(cand);
      if (mod < clin.shift_start || mod + clin.slot_minutes > clin.shift_end) continue;
      if ((mod - clin.shift_start) % clin.slot_minutes != 0) continue;
      break;
    }
    oracle.push_back(cand);
    last_end = cand + clin.slot_minutes;
  }

  CHECK(grants == oracle);
}

TEST_CASE("order probability: multiplier scales and clamps") {
  auto table = default_pdf_table();
  auto patient = test_patient(true);
  ClinicianProfile clin;

  SUBCASE("baseline 0 never orders") {
    table.set(pdf_keys::order(Measure::HbA1c), PdfSpec::bernoulli(0.0));
    clin.order_multiplier = {1.0, 1.0, 1.0, 1.0};
    CHECK(order_probability(patient, clin, Measure::HbA1c, table) == 0.0);
  }

  SUBCASE("baseline 1 always orders regardless of multiplier") {
    table.set(pdf_keys::order(Measure::HbA1c), PdfSpec::bernoulli(1.0));
    clin.order_multiplier = {7.5, 1.0, 1.0, 1.0};
    CHECK(order_probability(patient, clin, Measure::HbA1c, table) == 1.0);
  }

  SUBCASE("0.5 x 1.28 gives an empirical rate near 0.64") {
    table.set(pdf_keys::order(Measure::HbA1c), PdfSpec::bernoulli(0.5));
    clin.order_multiplier = {1.28, 1.0, 1.0, 1.0};
    const double p = order_probability(patient, clin, Measure::HbA1c, table);
    CHECK(p == doctest::Approx(0.64));
    auto stream = derive_stream(8, "order-rate");
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      if (stream.bernoulli(p)) ++hits;
    CHECK(std::abs(hits / double(n) - 0.64) < 0.005);
  }
}

TEST_CASE("doctor_visit: diabetic gating and wellness reset") {
  auto table = default_pdf_table();
  for (Measure m : kAllMeasures)
    table.set(pdf_keys::order(m), PdfSpec::bernoulli(1.0));
  ClinicianProfile clin;

  auto streams_for = [](RngStream& s) {
    return std::array<RngStream*, 4>{&s, &s, &s, &s};
  };

  SUBCASE("non-diabetic visits emit no orders") {
    auto patient = test_patient(false);
    auto stream = derive_stream(9, "visit-nondiabetic");
    auto streams = streams_for(stream);
    const auto orders = doctor_visit(patient, clin, days(40), VisitReason::SickVisit,
                                     table, streams, 0);
    CHECK(orders.empty());
  }

  SUBCASE("diabetic wellness visit orders every unsatisfied measure") {
    auto patient = test_patient(true);
    auto stream = derive_stream(10, "visit-diabetic");
    auto streams = streams_for(stream);
    const auto orders = doctor_visit(patient, clin, days(40),
                                     VisitReason::WellnessCheck, table, streams, 0);
    CHECK(orders.size() == 4);
    CHECK(patient.wellness_due == days(40) + days(365));
  }

  SUBCASE("satisfied measures are not re-ordered") {
    auto patient = test_patient(true);
    patient.screening_history[measure_index(Measure::HbA1c)] = days(20);
    auto stream = derive_stream(11, "visit-satisfied");
    auto streams = streams_for(stream);
    const auto orders = doctor_visit(patient, clin, days(40), VisitReason::SickVisit,
                                     table, streams, 0);
    CHECK(orders.size() == 3);
    for (const auto& order : orders) CHECK(order.measure != Measure::HbA1c);
  }
}

TEST_CASE("complete_test: probability and delay behave") {
  auto patient = test_patient(true);
  CareOrder order;
  order.patient = 0;
  order.measure = Measure::Ldl;
  order.ordered_at = days(100);

  SUBCASE("certain completion with zero delay lands at order time") {
    auto table = default_pdf_table();
    table.set(pdf_keys::completion(Measure::Ldl), PdfSpec::bernoulli(1.0));
    table.set(pdf_keys::kCompletionDelay, PdfSpec::uniform(0.0, 0.0));
    auto stream = derive_stream(12, "complete-zero");
    const auto done = complete_test(order, patient, table, stream);
    CHECK(done.completed);
    CHECK(*done.completed_at == order.ordered_at);
  }

  SUBCASE("zero completion probability never completes") {
    auto table = default_pdf_table();
    table.set(pdf_keys::completion(Measure::Ldl), PdfSpec::bernoulli(0.0));
    auto stream = derive_stream(13, "complete-never");
    for (int i = 0; i < 200; ++i) {
      const auto done = complete_test(order, patient, table, stream);
      CHECK_FALSE(done.completed);
    }
  }

  SUBCASE("delay stays inside the configured support") {
    auto table = default_pdf_table();
    table.set(pdf_keys::completion(Measure::Ldl), PdfSpec::bernoulli(1.0));
    auto stream = derive_stream(14, "complete-delay");
    for (int i = 0; i < 500; ++i) {
      const auto done = complete_test(order, patient, table, stream);
      REQUIRE(done.completed);
      const SimTime delay = *done.completed_at - order.ordered_at;
      CHECK(delay >= days(1));
      CHECK(delay <= days(14));
    }
  }
}

TEST_CASE("placeholder outcomes") {
  auto patient = test_patient(true);

  SUBCASE("degenerate uniform always returns the point") {
    auto stream = derive_stream(15, "placeholder-degenerate");
    const auto spec = PdfSpec::uniform(0.4, 0.4);
    for (int i = 0; i < 10; ++i)
      CHECK(placeholder_event_outcome(spec, patient, stream) == 0.4);
  }

  SUBCASE("uniform(0,1) mean settles near 0.5") {
    auto stream = derive_stream(16, "placeholder-mean");
    const auto spec = PdfSpec::uniform(0.0, 1.0);
    double total = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      total += placeholder_event_outcome(spec, patient, stream);
    CHECK(std::abs(total / n - 0.5) < 0.005);
  }

  SUBCASE("modifier pushing bernoulli p past 1 clamps") {
    auto stream = derive_stream(17, "placeholder-clamp");
    AttributeModifier mod;
    mod.attr = AttributeModifier::Attr::HasDiabetes;
    mod.op = AttributeModifier::Op::Gt;
    mod.threshold = 0.5;
    mod.adjust = AttributeModifier::Adjust::Multiply;
    mod.amount = 10.0;
    const auto spec = PdfSpec::bernoulli(0.2, {mod});
    CHECK(spec.adjusted_p(patient) == 1.0);
    for (int i = 0; i < 50; ++i)
      CHECK(placeholder_event_outcome(spec, patient, stream) == 1.0);
  }
}

TEST_CASE("pdf table: missing entry raises MissingPdf") {
  PdfTable table;
  CHECK_THROWS_AS(table.at("prompt.sick"), MissingPdf);
}

TEST_CASE("episode simulation: warm-up postconditions") {
  const auto specs = builtin_cluster_specs();

  SUBCASE("zero warm-up days books nothing ahead") {
    auto config = small_scenario(Arm::Baseline, 0);
    config.warmup_days = 0;
    auto sim = realize_scenario(config, specs[0], 0);
    CHECK(sim->trace().empty());
    for (const auto& book : sim->facility().appointment_book)
      CHECK(book.bookings() == 0);
  }

  SUBCASE("every patient is due for wellness within the coming year") {
    auto config = small_scenario(Arm::Baseline, 0);
    auto sim = realize_scenario(config, specs[0], 0);
    for (const auto& p : sim->population()) {
      CHECK(p.wellness_due >= sim->measure_start());
      CHECK(p.wellness_due < sim->measure_end());
    }
  }

  SUBCASE("measured window contains no warm-up events") {
    auto config = small_scenario(Arm::Baseline, 0);
    auto sim = realize_scenario(config, specs[0], 0);
    sim->run_measurement_year();
    for (const auto& ev : sim->trace())
      if (ev.time >= sim->measure_start())
        CHECK(ev.time - sim->measure_start() >= 0);
    // Completion events counted by the CQMs all sit inside the window.
    const auto results = compute_cqm(sim->trace(), sim->population(),
                                     sim->measure_start(), sim->measure_end());
    for (const auto& r : results) {
      CHECK(r.numerator <= r.denominator);
      CHECK(r.denominator > 0);
    }
  }
}

TEST_CASE("episode simulation: run invariants") {
  const auto specs = builtin_cluster_specs();
  auto config = small_scenario(Arm::Baseline, 0);
  auto sim = realize_scenario(config, specs[1], 3);
  sim->run_measurement_year();
  const auto& trace = sim->trace();
  REQUIRE(!trace.empty());

  SUBCASE("trace times are nondecreasing") {
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i].time >= trace[i - 1].time);
  }

  SUBCASE("no clinician double-booking") {
    // Attendance events mark occupied slots; one per (clinician, slot).
    std::set<std::pair<std::int64_t, SimTime>> seen;
    for (const auto& ev : trace) {
      if (ev.kind != EventKind::Attendance) continue;
      const auto clinician = std::stoll(ev.payload.at(1).second);
      const bool inserted = seen.insert({clinician, ev.time}).second;
      CHECK(inserted);
    }
  }

  SUBCASE("gating: non-diabetics have no symptom prompts or orders") {
    std::set<std::int64_t> diabetics;
    for (const auto& p : sim->population())
      if (p.has_diabetes) diabetics.insert(p.id);
    for (const auto& ev : trace) {
      switch (ev.kind) {
        case EventKind::SymptomPrompt:
        case EventKind::OrderHbA1c:
        case EventKind::OrderLdl:
        case EventKind::OrderEyeExam:
        case EventKind::OrderNephropathy:
          CHECK(diabetics.count(ev.subject) == 1);
          break;
        default:
          break;
      }
    }
  }

  SUBCASE("registry recall: every due patient requested or balked") {
    std::set<std::int64_t> requested;
    for (const auto& ev : trace)
      if (ev.kind == EventKind::AppointmentRequested ||
          ev.kind == EventKind::Balk)
        requested.insert(ev.subject);
    for (const auto& p : sim->population())
      if (p.wellness_due < sim->measure_end())
        CHECK(requested.count(p.id) == 1);
  }
}

TEST_CASE("episode simulation: identical seeds give byte-identical traces") {
  const auto specs = builtin_cluster_specs();
  auto config = small_scenario(Arm::Pilot, 2, 1234);
  auto sim1 = realize_scenario(config, specs[2], 7);
  sim1->run_measurement_year();
  auto sim2 = realize_scenario(config, specs[2], 7);
  sim2->run_measurement_year();
  CHECK(to_trace_text(sim1->trace()) == to_trace_text(sim2->trace()));
  CHECK(!sim1->trace().empty());
}

TEST_CASE("paired seeds: arm isolation before the measured year") {
  const auto specs = builtin_cluster_specs();
  auto baseline = small_scenario(Arm::Baseline, 0, 555);
  auto pilot = small_scenario(Arm::Pilot, 3, 555);
  auto sim_b = realize_scenario(baseline, specs[0], 11);
  auto sim_p = realize_scenario(pilot, specs[0], 11);

  // Identical populations and panel assignments...
  CHECK(population_text(sim_b->population()) == population_text(sim_p->population()));
  for (std::size_t i = 0; i < sim_b->population().size(); ++i)
    CHECK(sim_b->population()[i].assigned_clinician ==
          sim_p->population()[i].assigned_clinician);

  // ...and the only facility difference is the training multipliers.
  const auto& clins_b = sim_b->facility().clinicians;
  const auto& clins_p = sim_p->facility().clinicians;
  REQUIRE(clins_b.size() == clins_p.size());
  for (std::size_t c = 0; c < clins_b.size(); ++c) {
    CHECK(clins_b[c].shift_start == clins_p[c].shift_start);
    CHECK(clins_b[c].shift_end == clins_p[c].shift_end);
    CHECK(clins_b[c].slot_minutes == clins_p[c].slot_minutes);
    CHECK(clins_b[c].order_multiplier[0] == 1.0);
    CHECK(clins_p[c].order_multiplier[0] > 1.0);
  }
}

TEST_CASE("unpaired seeds: arms draw independent populations") {
  const auto specs = builtin_cluster_specs();
  auto baseline = small_scenario(Arm::Baseline, 0, 555);
  baseline.paired_seeds = false;
  auto pilot = small_scenario(Arm::Pilot, 3, 555);
  pilot.paired_seeds = false;
  auto sim_b = realize_scenario(baseline, specs[0], 11);
  auto sim_p = realize_scenario(pilot, specs[0], 11);
  CHECK(population_text(sim_b->population()) != population_text(sim_p->population()));
}
