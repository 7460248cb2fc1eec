#pragma once

#include <map>
#include <string>
#include <vector>

#include "caresim/measures.hpp"
#include "caresim/population.hpp"
#include "caresim/rng.hpp"

namespace caresim {

// A PDF entry for one event outcome. When no literature distribution is
// available an event carries a plain uniform spec (a placeholder) and still
// runs; the artifact pays in output uncertainty rather than refusing to
// simulate. Patient attributes adjust the realized parameter; realized
// probabilities always clamp to [0, 1].
enum class PdfKind : std::uint8_t { Bernoulli, Uniform, Categorical };

struct AttributeModifier {
  enum class Attr : std::uint8_t {
    Age,
    SesIndex,
    Insurance,
    HasDiabetes,
    Sex,
    RaceEthnicity,
  };
  enum class Op : std::uint8_t { Gt, Lt, Eq };
  enum class Adjust : std::uint8_t { Multiply, Add };

  Attr attr = Attr::Age;
  Op op = Op::Gt;
  double threshold = 0.0;   // numeric comparisons
  std::string category;     // Eq on categorical attributes
  Adjust adjust = Adjust::Multiply;
  double amount = 1.0;

  bool matches(const PatientProfile& patient) const;
};

struct PdfSpec {
  PdfKind kind = PdfKind::Bernoulli;
  double p = 0.0;                 // Bernoulli
  double lo = 0.0, hi = 0.0;      // Uniform
  std::vector<double> weights;    // Categorical
  std::vector<AttributeModifier> modifiers;

  static PdfSpec bernoulli(double p, std::vector<AttributeModifier> mods = {});
  static PdfSpec uniform(double lo, double hi);
  static PdfSpec categorical(std::vector<double> weights);

  void validate() const;  // throws InvalidSpec

  // Bernoulli probability after modifiers, clamped to [0, 1].
  double adjusted_p(const PatientProfile& patient) const;
};

// Draws an outcome from the spec after attribute adjustment. Bernoulli yields
// 0/1, Uniform the adjusted real value, Categorical the drawn index.
double placeholder_event_outcome(const PdfSpec& spec, const PatientProfile& patient,
                                 RngStream& stream);

// Keys used by the built-in episode handlers.
namespace pdf_keys {
inline constexpr const char* kSickPrompt = "prompt.sick";
inline constexpr const char* kSymptomPrompt = "prompt.diabetes_symptom";
inline constexpr const char* kAttendance = "attendance";
inline constexpr const char* kAcceptanceWindow = "acceptance_window";
inline constexpr const char* kCompletionDelay = "completion_delay";
std::string order(Measure m);
std::string completion(Measure m);
}  // namespace pdf_keys

// Event-outcome table: every event kind consumed by the episode handlers has
// an entry; scenario configs may override any entry or add placeholder kinds.
class PdfTable {
 public:
  const PdfSpec& at(const std::string& key) const;  // throws MissingPdf
  bool contains(const std::string& key) const { return entries_.count(key) > 0; }
  void set(const std::string& key, PdfSpec spec);

  const std::map<std::string, PdfSpec>& entries() const { return entries_; }

 private:
  std::map<std::string, PdfSpec> entries_;
};

// Shipped calibration defaults (see docs/calibration.md for the procedure).
PdfTable default_pdf_table();

}  // namespace caresim
