#include "vanplan/validate.h"

#include <set>
#include <sstream>

#include "vanplan/errors.h"

namespace vanplan {

const char* to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::CoverageMismatch:
    return "CoverageMismatch";
  case ViolationKind::DurationExceeded:
    return "DurationExceeded";
  case ViolationKind::BadIndex:
    return "BadIndex";
  case ViolationKind::DayClash:
    return "DayClash";
  }
  return "Unknown";
}

namespace {

bool tour_well_formed(const PlannedTour& tour, Index n) {
  if (tour.stops.empty() || tour.stops.size() != tour.exams.size()) {
    return false;
  }
  for (std::size_t j = 0; j < tour.stops.size(); ++j) {
    if (tour.stops[j] < 1 || tour.stops[j] > n || tour.exams[j] < 0) {
      return false;
    }
  }
  return true;
}

void check_assignment(const Schedule& schedule,
                      const Instance& instance,
                      std::vector<Violation>& out) {
  const auto m = schedule.tours.size();
  if (schedule.day_of.size() != m || schedule.van_of.size() != m) {
    std::ostringstream msg;
    msg << "day/van lists have " << schedule.day_of.size() << "/"
        << schedule.van_of.size() << " entries for " << m << " tours";
    out.push_back({ViolationKind::DayClash, msg.str(), std::nullopt});
    return;
  }
  const auto vans = vans_required(static_cast<Count>(m), instance.params);
  std::set<std::pair<Count, Count>> used;
  for (std::size_t t = 0; t < m; ++t) {
    const auto day = schedule.day_of[t];
    const auto van = schedule.van_of[t];
    if (day < 1 || day > instance.params.working_days) {
      std::ostringstream msg;
      msg << "day " << day << " outside 1.." << instance.params.working_days;
      out.push_back({ViolationKind::DayClash, msg.str(), t});
      continue;
    }
    if (van < 1 || van > vans) {
      std::ostringstream msg;
      msg << "van " << van << " outside 1.." << vans;
      out.push_back({ViolationKind::DayClash, msg.str(), t});
      continue;
    }
    if (!used.emplace(van, day).second) {
      std::ostringstream msg;
      msg << "van " << van << " already has a tour on day " << day;
      out.push_back({ViolationKind::DayClash, msg.str(), t});
    }
  }
}

} // namespace

std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         const Instance& instance) {
  std::vector<Violation> out;
  const auto n = instance.n();
  std::vector<Count> covered(static_cast<std::size_t>(n) + 1, 0);

  for (std::size_t t = 0; t < schedule.tours.size(); ++t) {
    const auto& tour = schedule.tours[t];
    if (!tour_well_formed(tour, n)) {
      std::ostringstream msg;
      msg << "tour " << t + 1
          << " has an empty route, misaligned exam counts, a negative count "
             "or a township outside 1.."
          << n;
      out.push_back({ViolationKind::BadIndex, msg.str(), t});
      continue;
    }
    for (std::size_t j = 0; j < tour.stops.size(); ++j) {
      covered[tour.stops[j]] += tour.exams[j];
    }
    const auto minutes = duration(tour, instance);
    if (minutes > instance.params.max_day) {
      std::ostringstream msg;
      msg << "tour " << t + 1 << " lasts " << minutes << " minutes, limit "
          << instance.params.max_day;
      out.push_back({ViolationKind::DurationExceeded, msg.str(), t});
    }
  }

  for (Index i = 1; i <= n && i < instance.demand.size(); ++i) {
    if (covered[i] != instance.demand[i]) {
      std::ostringstream msg;
      msg << "township " << i << " (" << instance.names[i] << ") receives "
          << covered[i] << " examinations, requires " << instance.demand[i];
      out.push_back({ViolationKind::CoverageMismatch, msg.str(), std::nullopt});
    }
  }

  check_assignment(schedule, instance, out);
  return out;
}

Minutes total_travel(const Schedule& schedule, const Instance& instance) {
  Minutes total = 0;
  for (const auto& tour : schedule.tours) {
    total += travel_time(tour.stops, instance);
  }
  return total;
}

Minutes total_duration(const Schedule& schedule, const Instance& instance) {
  Minutes total = 0;
  for (const auto& tour : schedule.tours) {
    total += duration(tour, instance);
  }
  return total;
}

std::weak_ordering compare_schedules(const Schedule& a,
                                     const Schedule& b,
                                     const Instance& instance) {
  for (const auto* s : {&a, &b}) {
    const auto violations = validate_schedule(*s, instance);
    if (!violations.empty()) {
      throw ContractViolation("cannot compare an invalid schedule: " +
                              violations.front().detail);
    }
  }
  if (a.tours.size() != b.tours.size()) {
    return a.tours.size() < b.tours.size() ? std::weak_ordering::less
                                           : std::weak_ordering::greater;
  }
  return total_duration(a, instance) <=> total_duration(b, instance);
}

} // namespace vanplan
