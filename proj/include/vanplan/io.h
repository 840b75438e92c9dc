#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vanplan/model.h"

namespace vanplan::io {

using json = nlohmann::ordered_json;

// Instance files ------------------------------------------------------------

// Builds an Instance from an instance document. `demand` wins over raw
// yearly births; exactly one of the two must be present. Throws
// SchemaError naming the offending key.
Instance instance_from_json(const json& doc);
json instance_to_json(const Instance& instance);

// Throws ParseError (with line and column) or SchemaError.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

// Reads the params object used by --config: any subset of
// {exam_duration, max_day, working_days} overriding `base`.
Params params_from_json(const json& doc, Params base = {});

// Schedule files ------------------------------------------------------------

json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const json& doc);
Schedule load_schedule(const std::filesystem::path& path);
void save_schedule(const Schedule& schedule, const std::filesystem::path& path);

// Parses a whole file as JSON. Throws ParseError with path, line and column.
json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Synthetic instances ---------------------------------------------------------

struct GenSpec {
  Index n = 93;
  Count births_lo = 2;
  Count births_hi = 16;
  // Driving minutes per coordinate unit (degree).
  double speed = 100.0;
  double lat_min = 46.9;
  double lat_max = 47.6;
  double lon_min = 26.6;
  double lon_max = 28.0;
  Seed seed = 1;
  Params params;

  void check() const;
};

// Random points in the box, index 0 the depot. Travel times are
// round(speed * euclidean) scaled per ordered pair by a factor in
// [1.0, 1.2], depot legs clamped so every singleton round trip fits one
// examination, then closed under shortest paths.
Instance generate_instance(const GenSpec& spec);

// Reports ---------------------------------------------------------------------

// One block per tour, grouped by day then van:
//   Schedule: <M> tours, <V> vans, <D> working days
//   Day <d>:
//   Day <d> Van <v> Tour <id>: drive=<min> exam=<min> total=<min>
//     <township>: <count> examinations
std::string write_schedule_text(const Schedule& schedule, const Instance& instance);

// RFC 7946 FeatureCollection: one LineString per distinct route, then one
// Point per location. Throws MissingCoordinates.
json export_geojson(const Schedule& schedule, const Instance& instance);
json export_geojson(std::span<const BasicTour> pool, const Instance& instance);

// Self-contained page listing every distinct route with an inline canvas
// renderer. Throws MissingCoordinates.
std::string export_html(const Schedule& schedule, const Instance& instance);

// Distance provider -----------------------------------------------------------

// Converts a table-service reply {"durations": [[seconds]]} to whole
// minutes, rounding up, diagonal forced to 0. Throws MalformedResponse.
Matrix durations_to_minutes(const json& reply, std::size_t size);

// GET <endpoint>/<lon,lat;lon,lat;...>?annotations=duration against an
// OSRM-compatible table service. Throws NetworkError or MalformedResponse.
Matrix fetch_distance_matrix(const std::string& endpoint, std::span<const Coord> coords);

} // namespace vanplan::io
