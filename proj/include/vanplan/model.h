#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vanplan/types.h"

namespace vanplan {

struct Params {
  Minutes exam_duration = 30;
  Minutes max_day = 600;
  Count working_days = 21;

  // Throws ConfigError when an invariant is broken.
  void check() const;

  bool operator==(const Params&) const = default;
};

struct Coord {
  double lat = 0;
  double lon = 0;

  bool operator==(const Coord&) const = default;
};

// Dense row-major (N+1)x(N+1) travel-time matrix, depot at row/column 0.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t size, Minutes fill = 0)
    : _size(size), _data(size * size, fill) {
  }

  std::size_t size() const {
    return _size;
  }

  Minutes& operator()(std::size_t i, std::size_t j) {
    return _data[i * _size + j];
  }
  Minutes operator()(std::size_t i, std::size_t j) const {
    return _data[i * _size + j];
  }

  std::span<const Minutes> row(std::size_t i) const {
    return {_data.data() + i * _size, _size};
  }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t _size = 0;
  std::vector<Minutes> _data;
};

struct Instance {
  std::vector<std::string> names;
  Matrix dist;
  std::vector<Count> demand;
  std::optional<std::vector<Coord>> coords;
  Params params;

  // Number of townships N (locations are 0..N).
  Index n() const {
    return dist.size() == 0 ? 0 : static_cast<Index>(dist.size() - 1);
  }

  Count total_demand() const;

  // Throws InvalidInstance naming the first broken invariant.
  void check() const;

  bool operator==(const Instance&) const = default;
};

// Depot-to-depot route over distinct townships, without examination counts.
struct BasicTour {
  std::vector<Index> stops;

  auto operator<=>(const BasicTour&) const = default;
};

// One van-day: a route plus per-stop examination counts. A township may
// appear more than once in a route; every visit carries its own count.
struct PlannedTour {
  std::vector<Index> stops;
  std::vector<Count> exams;

  Count total_exams() const;

  bool operator==(const PlannedTour&) const = default;
};

struct Schedule {
  std::vector<PlannedTour> tours;
  // Both 1-based, one entry per tour.
  std::vector<Count> day_of;
  std::vector<Count> van_of;

  bool operator==(const Schedule&) const = default;
};

// Monthly examinations from yearly births lacking timely prenatal care:
// seven examinations per pregnancy, spread over twelve months, rounded up.
Count derive_monthly_demand(Count yearly_untested_births);

// Vans needed when each van runs one tour per working day.
Count vans_required(Count num_tours, const Params& params);

// Driving minutes of depot -> stops -> depot. Throws InvalidInstance on
// an out-of-range index or empty route.
Minutes travel_time(std::span<const Index> stops, const Instance& instance);

inline Minutes travel_time(const BasicTour& tour, const Instance& instance) {
  return travel_time(tour.stops, instance);
}

// Driving plus examination minutes.
Minutes duration(const PlannedTour& tour, const Instance& instance);

// True iff every stop of the route can host at least one examination
// within the working day.
bool is_feasible_basic_tour(std::span<const Index> stops,
                            const Instance& instance);

// Townships with positive demand whose round trip plus one examination
// exceeds the working day. Empty means every demand can be served.
std::vector<Index> unreachable_townships(const Instance& instance);

// Townships with positive demand, ascending.
std::vector<Index> served_townships(const Instance& instance);

struct DayAssignment {
  std::vector<Count> day_of;
  std::vector<Count> van_of;
};

// Round-robin over working days in emission order: tour k runs on day
// k % working_days + 1 with van k / working_days + 1.
DayAssignment assign_days(std::size_t num_tours, const Params& params);

// Wraps planned tours into a schedule with the round-robin assignment.
Schedule make_schedule(std::vector<PlannedTour> tours, const Params& params);

} // namespace vanplan
