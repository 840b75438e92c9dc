#include "vanplan/model.h"

#include <numeric>
#include <sstream>

#include "vanplan/errors.h"

namespace vanplan {

void Params::check() const {
  if (exam_duration < 1) {
    throw ConfigError("exam_duration must be at least 1 minute");
  }
  if (max_day < exam_duration) {
    throw ConfigError("max_day must be at least exam_duration");
  }
  if (working_days < 1) {
    throw ConfigError("working_days must be at least 1");
  }
}

Count Instance::total_demand() const {
  return std::accumulate(demand.begin(), demand.end(), Count{0});
}

void Instance::check() const {
  const auto size = dist.size();
  if (size < 2) {
    throw InvalidInstance("instance needs a depot and at least one township");
  }
  if (names.size() != size) {
    std::ostringstream msg;
    msg << "expected " << size << " names, got " << names.size();
    throw InvalidInstance(msg.str());
  }
  if (demand.size() != size) {
    std::ostringstream msg;
    msg << "expected " << size << " demand entries, got " << demand.size();
    throw InvalidInstance(msg.str());
  }
  if (coords && coords->size() != size) {
    std::ostringstream msg;
    msg << "expected " << size << " coordinates, got " << coords->size();
    throw InvalidInstance(msg.str());
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (dist(i, i) != 0) {
      std::ostringstream msg;
      msg << "dist[" << i << "][" << i << "] must be 0";
      throw InvalidInstance(msg.str());
    }
    for (std::size_t j = 0; j < size; ++j) {
      if (dist(i, j) < 0) {
        std::ostringstream msg;
        msg << "dist[" << i << "][" << j << "] is negative";
        throw InvalidInstance(msg.str());
      }
    }
  }
  if (demand[depot] != 0) {
    throw InvalidInstance("demand of the depot must be 0");
  }
  for (std::size_t i = 1; i < size; ++i) {
    if (demand[i] < 0) {
      std::ostringstream msg;
      msg << "demand[" << i << "] is negative";
      throw InvalidInstance(msg.str());
    }
  }
  try {
    params.check();
  } catch (const ConfigError& e) {
    throw InvalidInstance(e.what());
  }
}

Count PlannedTour::total_exams() const {
  return std::accumulate(exams.begin(), exams.end(), Count{0});
}

Count derive_monthly_demand(Count yearly_untested_births) {
  return (yearly_untested_births * 7 + 11) / 12;
}

Count vans_required(Count num_tours, const Params& params) {
  return (num_tours + params.working_days - 1) / params.working_days;
}

Minutes travel_time(std::span<const Index> stops, const Instance& instance) {
  const auto n = instance.n();
  if (stops.empty()) {
    throw InvalidInstance("tour has no stops");
  }
  Minutes total = 0;
  Index previous = depot;
  for (const auto stop : stops) {
    if (stop < 1 || stop > n) {
      std::ostringstream msg;
      msg << "township index " << stop << " outside 1.." << n;
      throw InvalidInstance(msg.str());
    }
    total += instance.dist(previous, stop);
    previous = stop;
  }
  return total + instance.dist(previous, depot);
}

Minutes duration(const PlannedTour& tour, const Instance& instance) {
  if (tour.exams.size() != tour.stops.size()) {
    throw InvalidInstance("exam counts not aligned with stops");
  }
  return travel_time(tour.stops, instance) +
         instance.params.exam_duration * tour.total_exams();
}

bool is_feasible_basic_tour(std::span<const Index> stops,
                            const Instance& instance) {
  const auto slots = static_cast<Minutes>(stops.size());
  return travel_time(stops, instance) +
           instance.params.exam_duration * slots <=
         instance.params.max_day;
}

std::vector<Index> unreachable_townships(const Instance& instance) {
  std::vector<Index> out;
  for (const auto i : served_townships(instance)) {
    const auto round_trip = instance.dist(depot, i) + instance.dist(i, depot);
    if (round_trip + instance.params.exam_duration > instance.params.max_day) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Index> served_townships(const Instance& instance) {
  std::vector<Index> out;
  for (Index i = 1; i <= instance.n(); ++i) {
    if (instance.demand[i] > 0) {
      out.push_back(i);
    }
  }
  return out;
}

DayAssignment assign_days(std::size_t num_tours, const Params& params) {
  DayAssignment out;
  out.day_of.reserve(num_tours);
  out.van_of.reserve(num_tours);
  const auto days = static_cast<std::size_t>(params.working_days);
  for (std::size_t k = 0; k < num_tours; ++k) {
    out.day_of.push_back(static_cast<Count>(k % days) + 1);
    out.van_of.push_back(static_cast<Count>(k / days) + 1);
  }
  return out;
}

Schedule make_schedule(std::vector<PlannedTour> tours, const Params& params) {
  auto assignment = assign_days(tours.size(), params);
  return Schedule{std::move(tours),
                  std::move(assignment.day_of),
                  std::move(assignment.van_of)};
}

} // namespace vanplan
