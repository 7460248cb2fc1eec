#pragma once

#include <cstdint>

namespace caresim {

// Simulation clock in integer minutes. Integer time keeps event ordering
// platform-stable; floating time does not.
using SimTime = std::int64_t;

inline constexpr SimTime kMinutesPerHour = 60;
inline constexpr SimTime kMinutesPerDay = 24 * kMinutesPerHour;
inline constexpr SimTime kDaysPerWeek = 7;

constexpr SimTime days(SimTime d) { return d * kMinutesPerDay; }
constexpr SimTime hours(SimTime h) { return h * kMinutesPerHour; }

constexpr SimTime day_of(SimTime t) { return t / kMinutesPerDay; }
constexpr SimTime minute_of_day(SimTime t) { return t % kMinutesPerDay; }

// Day 0 is a Monday; weekdays are 0..4.
constexpr bool is_weekday(SimTime t) { return day_of(t) % kDaysPerWeek < 5; }

}  // namespace caresim
