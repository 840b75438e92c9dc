#pragma once

// Test-only fixtures and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "vanplan/io.h"
#include "vanplan/model.h"

namespace vanplan::test {

inline Instance make_instance(const std::vector<std::vector<Minutes>>& rows,
                              std::vector<Count> demand,
                              Params params = {}) {
  Instance instance;
  instance.dist = Matrix(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      instance.dist(i, j) = rows[i][j];
    }
  }
  instance.names.push_back("Capital");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    instance.names.push_back("T" + std::to_string(i));
  }
  instance.demand = std::move(demand);
  instance.params = params;
  return instance;
}

// One township, symmetric legs of `leg` minutes.
inline Instance single_township(Minutes leg, Count demand) {
  return make_instance({{0, leg}, {leg, 0}}, {0, demand});
}

// Depot A B with dist[0][A]=100, dist[A][B]=50, dist[B][0]=40 and the
// reverse legs dist[0][B]=40, dist[B][A]=50, dist[A][0]=60.
inline Instance two_township_fixture(Count demand_a, Count demand_b) {
  return make_instance({{0, 100, 40}, {60, 0, 50}, {40, 50, 0}}, {0, demand_a, demand_b});
}

inline Instance random_metric_instance(Index n, Seed seed, Count births_hi = 16,
                                       double speed = 100.0, Params params = {}) {
  io::GenSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.births_lo = 0;
  spec.births_hi = births_hi;
  spec.speed = speed;
  spec.params = params;
  return io::generate_instance(spec);
}

// Route minutes summed leg by leg, independent of model::travel_time.
inline Minutes oracle_travel(const std::vector<Index>& stops, const Instance& instance) {
  Minutes total = 0;
  Index at = 0;
  for (const auto s : stops) {
    total += instance.dist(at, s);
    at = s;
  }
  return total + instance.dist(at, 0);
}

// Duration of the tour that performs the examination townships
// `townships[first..last)` in order, consecutive repeats sharing a stop.
inline Minutes oracle_segment_duration(const std::vector<Index>& townships,
                                       std::size_t first,
                                       std::size_t last,
                                       const Instance& instance) {
  std::vector<Index> stops;
  for (auto k = first; k < last; ++k) {
    if (stops.empty() || stops.back() != townships[k]) {
      stops.push_back(townships[k]);
    }
  }
  return oracle_travel(stops, instance) +
         instance.params.exam_duration * static_cast<Minutes>(last - first);
}

// Fewest contiguous feasible segments covering the sequence:
// best[j] = min over i < j with segment (i, j] feasible of best[i] + 1.
inline std::size_t oracle_min_splits(const std::vector<Index>& townships,
                                     const Instance& instance) {
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  const auto n = townships.size();
  std::vector<std::size_t> best(n + 1, inf);
  best[0] = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (best[i] == inf) {
        continue;
      }
      if (oracle_segment_duration(townships, i, j, instance) <= instance.params.max_day) {
        best[j] = std::min(best[j], best[i] + 1);
      }
    }
  }
  return best[n];
}

// Least total travel over every partition of `townships` into feasible
// routes (each stop with one examination slot) and every route order.
inline Minutes oracle_best_partition_travel(const std::vector<Index>& townships,
                                            const Instance& instance) {
  const auto n = townships.size();
  const std::size_t subsets = std::size_t{1} << n;
  constexpr auto inf = std::numeric_limits<Minutes>::max();

  std::vector<Minutes> route_best(subsets, inf);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<Index> route;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) {
        route.push_back(townships[b]);
      }
    }
    std::sort(route.begin(), route.end());
    do {
      const auto travel = oracle_travel(route, instance);
      const auto slots = instance.params.exam_duration * static_cast<Minutes>(route.size());
      if (travel + slots <= instance.params.max_day) {
        route_best[mask] = std::min(route_best[mask], travel);
      }
    } while (std::next_permutation(route.begin(), route.end()));
  }

  std::vector<Minutes> cover(subsets, inf);
  cover[0] = 0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    // Blocks containing the lowest set bit, so each partition is seen once.
    const auto low = mask & (~mask + 1);
    for (auto sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || route_best[sub] == inf || cover[mask ^ sub] == inf) {
        continue;
      }
      cover[mask] = std::min(cover[mask], cover[mask ^ sub] + route_best[sub]);
    }
  }
  return cover[subsets - 1];
}

// Structural RFC 7946 check. Returns an empty string when valid.
inline std::string geojson_error(const nlohmann::ordered_json& doc) {
  using json = nlohmann::ordered_json;
  std::function<std::string(const json&)> position = [](const json& p) -> std::string {
    if (!p.is_array() || p.size() < 2 || p.size() > 3) {
      return "position must hold 2 or 3 numbers";
    }
    for (const auto& v : p) {
      if (!v.is_number()) {
        return "position entries must be numbers";
      }
    }
    if (std::abs(p[0].get<double>()) > 180 || std::abs(p[1].get<double>()) > 90) {
      return "position outside lon/lat range";
    }
    return {};
  };
  auto geometry = [&](const json& g) -> std::string {
    if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
      return "geometry needs type and coordinates";
    }
    const auto type = g["type"].get<std::string>();
    const auto& c = g["coordinates"];
    if (type == "Point") {
      return position(c);
    }
    if (type == "LineString" || type == "MultiPoint") {
      if (!c.is_array() || (type == "LineString" && c.size() < 2)) {
        return "LineString needs at least two positions";
      }
      for (const auto& p : c) {
        if (auto e = position(p); !e.empty()) {
          return e;
        }
      }
      return {};
    }
    return "unsupported geometry type " + type;
  };
  auto feature = [&](const json& f) -> std::string {
    if (!f.is_object() || f.value("type", "") != "Feature") {
      return "feature must have type Feature";
    }
    if (!f.contains("geometry") || !f.contains("properties")) {
      return "feature needs geometry and properties members";
    }
    if (!f["properties"].is_object() && !f["properties"].is_null()) {
      return "properties must be an object or null";
    }
    return f["geometry"].is_null() ? std::string() : geometry(f["geometry"]);
  };

  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    return "root must be a FeatureCollection";
  }
  if (!doc.contains("features") || !doc["features"].is_array()) {
    return "features must be an array";
  }
  for (const auto& f : doc["features"]) {
    if (auto e = feature(f); !e.empty()) {
      return e;
    }
  }
  return {};
}

} // namespace vanplan::test
