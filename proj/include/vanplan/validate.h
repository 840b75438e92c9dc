#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "vanplan/model.h"

namespace vanplan {

enum class ViolationKind { CoverageMismatch, DurationExceeded, BadIndex, DayClash };

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
  std::optional<std::size_t> tour_index;
};

// Empty result means the schedule covers every township's demand exactly,
// keeps every tour within the working day, and carries a clash-free
// day/van assignment. Never throws on malformed schedules.
std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         const Instance& instance);

Minutes total_travel(const Schedule& schedule, const Instance& instance);
Minutes total_duration(const Schedule& schedule, const Instance& instance);

// Fewer tours first, then smaller total duration. `less` means `a` is the
// better schedule. Throws ContractViolation if either schedule is invalid.
std::weak_ordering compare_schedules(const Schedule& a,
                                     const Schedule& b,
                                     const Instance& instance);

} // namespace vanplan
