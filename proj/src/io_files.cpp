#include <fstream>
#include <limits>
#include <sstream>

#include "vanplan/errors.h"
#include "vanplan/io.h"

namespace vanplan::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw SchemaError(what);
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    schema_error(std::string("missing key '") + key + "'");
  }
  return doc.at(key);
}

Count as_count(const json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    schema_error(where + " must be an integer");
  }
  return value.get<Count>();
}

std::vector<Count> count_array(const json& value, const std::string& key, std::size_t size) {
  if (!value.is_array() || value.size() != size) {
    std::ostringstream msg;
    msg << "'" << key << "' must be an array of " << size << " integers";
    schema_error(msg.str());
  }
  std::vector<Count> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(as_count(value[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

} // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << path.string() << ":" << line << ":" << column << ": " << e.what();
    throw ParseError(msg.str());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError(path.string() + ": cannot open file for writing");
  }
  out << text;
  if (!out) {
    throw ParseError(path.string() + ": write failed");
  }
}

Params params_from_json(const json& doc, Params base) {
  if (!doc.is_object()) {
    schema_error("'params' must be an object");
  }
  if (doc.contains("exam_duration")) {
    base.exam_duration = as_count(doc["exam_duration"], "params.exam_duration");
  }
  if (doc.contains("max_day")) {
    base.max_day = as_count(doc["max_day"], "params.max_day");
  }
  if (doc.contains("working_days")) {
    base.working_days = as_count(doc["working_days"], "params.working_days");
  }
  try {
    base.check();
  } catch (const ConfigError& e) {
    schema_error(std::string("params: ") + e.what());
  }
  return base;
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) {
    schema_error("instance document must be a JSON object");
  }
  Instance instance;

  const auto& rows = require(doc, "dist_minutes");
  if (!rows.is_array() || rows.size() < 2) {
    schema_error("'dist_minutes' must be an array of at least 2 rows");
  }
  const auto size = rows.size();
  instance.dist = Matrix(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!rows[i].is_array() || rows[i].size() != size) {
      std::ostringstream msg;
      msg << "'dist_minutes' must be square: row " << i << " does not have " << size
          << " entries";
      schema_error(msg.str());
    }
    for (std::size_t j = 0; j < size; ++j) {
      std::ostringstream where;
      where << "dist_minutes[" << i << "][" << j << "]";
      const auto d = as_count(rows[i][j], where.str());
      if (d < 0) {
        schema_error(where.str() + " must be non-negative");
      }
      if (i == j && d != 0) {
        schema_error(where.str() + " must be 0 on the diagonal");
      }
      instance.dist(i, j) = d;
    }
  }

  const auto& names = require(doc, "names");
  if (!names.is_array() || names.size() != size) {
    schema_error("'names' must be an array of " + std::to_string(size) + " strings");
  }
  for (const auto& name : names) {
    if (!name.is_string()) {
      schema_error("'names' entries must be strings");
    }
    instance.names.push_back(name.get<std::string>());
  }

  const bool has_demand = doc.contains("demand");
  const bool has_births = doc.contains("yearly_untested_births");
  if (has_demand == has_births) {
    schema_error("exactly one of 'demand' and 'yearly_untested_births' must be present");
  }
  if (has_demand) {
    instance.demand = count_array(doc["demand"], "demand", size);
  } else {
    for (const auto births : count_array(doc["yearly_untested_births"], "yearly_untested_births", size)) {
      if (births < 0) {
        schema_error("'yearly_untested_births' entries must be non-negative");
      }
      instance.demand.push_back(derive_monthly_demand(births));
    }
    instance.demand[depot] = 0;
  }
  if (instance.demand[depot] != 0) {
    schema_error("demand[0] must be 0: the capital is not served");
  }
  for (std::size_t i = 1; i < size; ++i) {
    if (instance.demand[i] < 0) {
      schema_error("demand[" + std::to_string(i) + "] must be non-negative");
    }
  }

  if (doc.contains("coords")) {
    const auto& coords = doc["coords"];
    if (!coords.is_array() || coords.size() != size) {
      schema_error("'coords' must be an array of " + std::to_string(size) + " [lat, lon] pairs");
    }
    std::vector<Coord> out;
    for (const auto& pair : coords) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        schema_error("'coords' entries must be [lat, lon] number pairs");
      }
      out.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    instance.coords = std::move(out);
  }

  if (doc.contains("params")) {
    instance.params = params_from_json(doc["params"]);
  }

  try {
    instance.check();
  } catch (const InvalidInstance& e) {
    schema_error(e.what());
  }
  return instance;
}

json instance_to_json(const Instance& instance) {
  json doc;
  doc["names"] = instance.names;
  doc["demand"] = instance.demand;
  json rows = json::array();
  for (std::size_t i = 0; i < instance.dist.size(); ++i) {
    const auto row = instance.dist.row(i);
    rows.push_back(std::vector<Minutes>(row.begin(), row.end()));
  }
  doc["dist_minutes"] = std::move(rows);
  if (instance.coords) {
    json coords = json::array();
    for (const auto& c : *instance.coords) {
      coords.push_back({c.lat, c.lon});
    }
    doc["coords"] = std::move(coords);
  }
  doc["params"] = {{"exam_duration", instance.params.exam_duration},
                   {"max_day", instance.params.max_day},
                   {"working_days", instance.params.working_days}};
  return doc;
}

Instance load_instance(const std::filesystem::path& path) {
  const auto doc = read_json(path);
  try {
    return instance_from_json(doc);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_text(path, instance_to_json(instance).dump(1) + "\n");
}

json schedule_to_json(const Schedule& schedule) {
  json tours = json::array();
  for (const auto& tour : schedule.tours) {
    tours.push_back({{"stops", tour.stops}, {"exams", tour.exams}});
  }
  json doc;
  doc["tours"] = std::move(tours);
  doc["day_of"] = schedule.day_of;
  doc["van_of"] = schedule.van_of;
  return doc;
}

Schedule schedule_from_json(const json& doc) {
  if (!doc.is_object()) {
    schema_error("schedule document must be a JSON object");
  }
  const auto& tours = require(doc, "tours");
  if (!tours.is_array()) {
    schema_error("'tours' must be an array");
  }
  Schedule schedule;
  for (std::size_t t = 0; t < tours.size(); ++t) {
    const auto& tour = tours[t];
    const auto where = "tours[" + std::to_string(t) + "]";
    if (!tour.is_object()) {
      schema_error(where + " must be an object");
    }
    const auto& stops = require(tour, "stops");
    const auto& exams = require(tour, "exams");
    if (!stops.is_array() || !exams.is_array()) {
      schema_error(where + ".stops and .exams must be arrays");
    }
    PlannedTour planned;
    for (const auto& s : stops) {
      const auto stop = as_count(s, where + ".stops");
      if (stop < 0 || stop > static_cast<Count>(std::numeric_limits<Index>::max())) {
        schema_error(where + ".stops entries must be township indices");
      }
      planned.stops.push_back(static_cast<Index>(stop));
    }
    for (const auto& e : exams) {
      planned.exams.push_back(as_count(e, where + ".exams"));
    }
    schedule.tours.push_back(std::move(planned));
  }
  const auto& day_of = require(doc, "day_of");
  const auto& van_of = require(doc, "van_of");
  if (!day_of.is_array() || !van_of.is_array()) {
    schema_error("'day_of' and 'van_of' must be arrays");
  }
  for (const auto& d : day_of) {
    schedule.day_of.push_back(as_count(d, "day_of"));
  }
  for (const auto& v : van_of) {
    schedule.van_of.push_back(as_count(v, "van_of"));
  }
  return schedule;
}

Schedule load_schedule(const std::filesystem::path& path) {
  const auto doc = read_json(path);
  try {
    return schedule_from_json(doc);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_schedule(const Schedule& schedule, const std::filesystem::path& path) {
  write_text(path, schedule_to_json(schedule).dump(1) + "\n");
}

} // namespace vanplan::io
