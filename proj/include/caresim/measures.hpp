#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "caresim/errors.hpp"
#include "caresim/event.hpp"

namespace caresim {

// The four diabetes screening measures tracked by the study design.
enum class Measure : std::uint8_t { HbA1c = 0, Ldl = 1, EyeExam = 2, Nephropathy = 3 };

inline constexpr std::array<Measure, 4> kAllMeasures = {
    Measure::HbA1c, Measure::Ldl, Measure::EyeExam, Measure::Nephropathy};

inline constexpr std::size_t measure_index(Measure m) {
  return static_cast<std::size_t>(m);
}

std::string_view to_string(Measure m);
Measure measure_from_string(std::string_view name);

EventKind order_event_kind(Measure m);
EventKind completion_event_kind(Measure m);
Measure measure_of_completion(EventKind kind);

}  // namespace caresim
