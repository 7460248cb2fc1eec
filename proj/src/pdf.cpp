#include "caresim/pdf.hpp"

#include <algorithm>
#include <cmath>

namespace caresim {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double numeric_attribute(AttributeModifier::Attr attr, const PatientProfile& p) {
  switch (attr) {
    case AttributeModifier::Attr::Age: return p.age;
    case AttributeModifier::Attr::SesIndex: return p.ses_index;
    case AttributeModifier::Attr::HasDiabetes: return p.has_diabetes ? 1.0 : 0.0;
    default:
      throw InvalidSpec("modifier attribute is not numeric");
  }
}

std::string_view category_attribute(AttributeModifier::Attr attr,
                                    const PatientProfile& p) {
  switch (attr) {
    case AttributeModifier::Attr::Insurance: return to_string(p.insurance);
    case AttributeModifier::Attr::Sex:
      return p.sex == Sex::Female ? "female" : "male";
    case AttributeModifier::Attr::RaceEthnicity:
      return p.race_ethnicity == RaceEthnicity::Minority ? "minority" : "nonminority";
    default:
      throw InvalidSpec("modifier attribute is not categorical");
  }
}

bool is_categorical(AttributeModifier::Attr attr) {
  return attr == AttributeModifier::Attr::Insurance ||
         attr == AttributeModifier::Attr::Sex ||
         attr == AttributeModifier::Attr::RaceEthnicity;
}

}  // namespace

bool AttributeModifier::matches(const PatientProfile& patient) const {
  if (is_categorical(attr)) {
    if (op != Op::Eq) throw InvalidSpec("categorical attributes support only eq");
    return category_attribute(attr, patient) == category;
  }
  const double value = numeric_attribute(attr, patient);
  switch (op) {
    case Op::Gt: return value > threshold;
    case Op::Lt: return value < threshold;
    case Op::Eq: return value == threshold;
  }
  return false;
}

PdfSpec PdfSpec::bernoulli(double p, std::vector<AttributeModifier> mods) {
  PdfSpec spec;
  spec.kind = PdfKind::Bernoulli;
  spec.p = p;
  spec.modifiers = std::move(mods);
  spec.validate();
  return spec;
}

PdfSpec PdfSpec::uniform(double lo, double hi) {
  PdfSpec spec;
  spec.kind = PdfKind::Uniform;
  spec.lo = lo;
  spec.hi = hi;
  spec.validate();
  return spec;
}

PdfSpec PdfSpec::categorical(std::vector<double> weights) {
  PdfSpec spec;
  spec.kind = PdfKind::Categorical;
  spec.weights = std::move(weights);
  spec.validate();
  return spec;
}

void PdfSpec::validate() const {
  switch (kind) {
    case PdfKind::Bernoulli:
      if (!(p >= 0.0 && p <= 1.0))
        throw InvalidSpec("bernoulli p outside [0,1]: " + std::to_string(p));
      break;
    case PdfKind::Uniform:
      if (lo > hi) throw InvalidSpec("uniform spec with lo > hi");
      break;
    case PdfKind::Categorical: {
      if (weights.empty()) throw InvalidSpec("categorical spec with no weights");
      double total = 0.0;
      for (double w : weights) {
        if (w < 0.0) throw InvalidSpec("categorical spec with negative weight");
        total += w;
      }
      if (total <= 0.0) throw InvalidSpec("categorical weights sum to zero");
      break;
    }
  }
}

double PdfSpec::adjusted_p(const PatientProfile& patient) const {
  if (kind != PdfKind::Bernoulli)
    throw InvalidSpec("adjusted_p requires a bernoulli spec");
  double value = p;
  for (const auto& mod : modifiers) {
    if (!mod.matches(patient)) continue;
    if (mod.adjust == AttributeModifier::Adjust::Multiply)
      value *= mod.amount;
    else
      value += mod.amount;
  }
  return clamp01(value);
}

double placeholder_event_outcome(const PdfSpec& spec, const PatientProfile& patient,
                                 RngStream& stream) {
  spec.validate();
  switch (spec.kind) {
    case PdfKind::Bernoulli:
      return stream.bernoulli(spec.adjusted_p(patient)) ? 1.0 : 0.0;
    case PdfKind::Uniform: {
      double value = stream.uniform(spec.lo, spec.hi);
      for (const auto& mod : spec.modifiers) {
        if (!mod.matches(patient)) continue;
        if (mod.adjust == AttributeModifier::Adjust::Multiply)
          value *= mod.amount;
        else
          value += mod.amount;
      }
      return value;
    }
    case PdfKind::Categorical:
      return static_cast<double>(stream.categorical(spec.weights));
  }
  throw InvalidSpec("unknown pdf kind");
}

namespace pdf_keys {
std::string order(Measure m) { return "order." + std::string(to_string(m)); }
std::string completion(Measure m) {
  return "completion." + std::string(to_string(m));
}
}  // namespace pdf_keys

const PdfSpec& PdfTable::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw MissingPdf("no pdf entry for '" + key + "'");
  return it->second;
}

void PdfTable::set(const std::string& key, PdfSpec spec) {
  spec.validate();
  entries_[key] = std::move(spec);
}

PdfTable default_pdf_table() {
  using Mod = AttributeModifier;
  PdfTable table;

  // Daily hazards for the episode entry prompts.
  table.set(pdf_keys::kSickPrompt,
            PdfSpec::bernoulli(
                0.008, {Mod{.attr = Mod::Attr::Age, .op = Mod::Op::Gt,
                            .threshold = 60.0, .category = {},
                            .adjust = Mod::Adjust::Multiply, .amount = 1.25}}));
  table.set(pdf_keys::kSymptomPrompt,
            PdfSpec::bernoulli(
                0.004, {Mod{.attr = Mod::Attr::SesIndex, .op = Mod::Op::Lt,
                            .threshold = 0.35, .category = {},
                            .adjust = Mod::Adjust::Multiply, .amount = 1.15}}));

  // Screening-order probabilities per visit (baseline arm). Insurance gaps
  // lower the chance an order is placed.
  auto access_mods = [] {
    return std::vector<Mod>{
        Mod{.attr = Mod::Attr::Insurance, .op = Mod::Op::Eq,
            .category = "uninsured", .adjust = Mod::Adjust::Multiply,
            .amount = 0.85},
        Mod{.attr = Mod::Attr::Insurance, .op = Mod::Op::Eq,
            .category = "intermittent", .adjust = Mod::Adjust::Multiply,
            .amount = 0.95},
    };
  };
  table.set(pdf_keys::order(Measure::HbA1c), PdfSpec::bernoulli(0.105, access_mods()));
  table.set(pdf_keys::order(Measure::Ldl), PdfSpec::bernoulli(0.090, access_mods()));
  table.set(pdf_keys::order(Measure::EyeExam), PdfSpec::bernoulli(0.026, access_mods()));
  table.set(pdf_keys::order(Measure::Nephropathy),
            PdfSpec::bernoulli(0.037, access_mods()));

  // Completion probability per ordered test, and lab/exam turnaround.
  for (Measure m : kAllMeasures)
    table.set(pdf_keys::completion(m),
              PdfSpec::bernoulli(
                  0.90, {Mod{.attr = Mod::Attr::Insurance, .op = Mod::Op::Eq,
                             .category = "uninsured",
                             .adjust = Mod::Adjust::Multiply, .amount = 0.92}}));
  table.set(pdf_keys::kCompletionDelay,
            PdfSpec::uniform(static_cast<double>(days(1)),
                             static_cast<double>(days(14))));

  table.set(pdf_keys::kAttendance,
            PdfSpec::bernoulli(
                0.90, {Mod{.attr = Mod::Attr::Insurance, .op = Mod::Op::Eq,
                           .category = "uninsured",
                           .adjust = Mod::Adjust::Multiply, .amount = 0.95}}));

  // Patients accept any slot inside this window (minutes); degenerate 30 days.
  table.set(pdf_keys::kAcceptanceWindow,
            PdfSpec::uniform(static_cast<double>(days(30)),
                             static_cast<double>(days(30))));

  return table;
}

}  // namespace caresim
