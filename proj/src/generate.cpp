#include <algorithm>
#include <cmath>

#include "vanplan/errors.h"
#include "vanplan/io.h"

namespace vanplan::io {

void GenSpec::check() const {
  if (n < 1) {
    throw ConfigError("generator needs at least one township");
  }
  if (births_lo < 0 || births_lo > births_hi) {
    throw ConfigError("births range must satisfy 0 <= lo <= hi");
  }
  if (!(speed > 0)) {
    throw ConfigError("speed must be positive");
  }
  if (!(lat_min <= lat_max && lon_min <= lon_max)) {
    throw ConfigError("bounding box is empty");
  }
  params.check();
}

Instance generate_instance(const GenSpec& spec) {
  spec.check();
  Rng rng(spec.seed);
  const std::size_t size = static_cast<std::size_t>(spec.n) + 1;

  std::uniform_real_distribution<double> lat(spec.lat_min, spec.lat_max);
  std::uniform_real_distribution<double> lon(spec.lon_min, spec.lon_max);
  std::vector<Coord> coords;
  coords.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto la = lat(rng);
    coords.push_back({la, lon(rng)});
  }

  // Longest depot leg that still leaves room for one examination.
  const Minutes leg_limit = (spec.params.max_day - spec.params.exam_duration) / 2;
  std::uniform_real_distribution<double> detour(1.0, 1.2);
  Matrix dist(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const auto factor = detour(rng);
      if (i == j) {
        continue;
      }
      const auto base = std::llround(spec.speed * std::hypot(coords[i].lat - coords[j].lat,
                                                             coords[i].lon - coords[j].lon));
      auto minutes = static_cast<Minutes>(std::llround(static_cast<double>(base) * factor));
      if (i == depot || j == depot) {
        minutes = std::min(minutes, leg_limit);
      }
      dist(i, j) = minutes;
    }
  }
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        dist(i, j) = std::min(dist(i, j), dist(i, k) + dist(k, j));
      }
    }
  }

  Instance instance;
  instance.dist = std::move(dist);
  instance.coords = std::move(coords);
  instance.params = spec.params;
  instance.names.push_back("Capital");
  instance.demand.push_back(0);
  std::uniform_int_distribution<Count> births(spec.births_lo, spec.births_hi);
  for (std::size_t i = 1; i < size; ++i) {
    instance.names.push_back("Township " + std::to_string(i));
    instance.demand.push_back(derive_monthly_demand(births(rng)));
  }
  return instance;
}

} // namespace vanplan::io
