#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "vanplan/errors.h"
#include "vanplan/io.h"

namespace vanplan::io {

std::string write_schedule_text(const Schedule& schedule, const Instance& instance) {
  const auto m = schedule.tours.size();
  std::ostringstream out;
  out << "Schedule: " << m << " tours, "
      << vans_required(static_cast<Count>(m), instance.params) << " vans, "
      << instance.params.working_days << " working days\n";

  // (day, van, tour) ordering; a malformed assignment still prints every tour.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto day = [&](std::size_t t) { return t < schedule.day_of.size() ? schedule.day_of[t] : 0; };
  auto van = [&](std::size_t t) { return t < schedule.van_of.size() ? schedule.van_of[t] : 0; };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return std::pair(day(a), van(a)) < std::pair(day(b), van(b));
  });

  auto next = order.begin();
  for (Count d = 1; d <= instance.params.working_days; ++d) {
    out << "Day " << d << ":\n";
    while (next != order.end() && day(*next) < d) {
      ++next;
    }
    for (; next != order.end() && day(*next) == d; ++next) {
      const auto& tour = schedule.tours[*next];
      const auto drive = travel_time(tour.stops, instance);
      const auto exam = instance.params.exam_duration * tour.total_exams();
      out << "Day " << d << " Van " << van(*next) << " Tour " << *next + 1
          << ": drive=" << drive << " exam=" << exam << " total=" << drive + exam << "\n";
      for (std::size_t j = 0; j < tour.stops.size(); ++j) {
        out << "  " << instance.names[tour.stops[j]] << ": " << tour.exams[j]
            << " examinations\n";
      }
    }
  }
  return out.str();
}

namespace {

const std::vector<Coord>& require_coords(const Instance& instance) {
  if (!instance.coords) {
    throw MissingCoordinates();
  }
  return *instance.coords;
}

json position(const Coord& c) {
  return json::array({c.lon, c.lat});
}

json line_geometry(const std::vector<Index>& stops, const std::vector<Coord>& coords) {
  json line = json::array();
  line.push_back(position(coords[depot]));
  for (const auto s : stops) {
    line.push_back(position(coords[s]));
  }
  line.push_back(position(coords[depot]));
  return {{"type", "LineString"}, {"coordinates", std::move(line)}};
}

json stop_names(const std::vector<Index>& stops, const Instance& instance) {
  json names = json::array();
  for (const auto s : stops) {
    names.push_back(instance.names[s]);
  }
  return names;
}

void append_points(json& features, const Instance& instance, const std::vector<Coord>& coords) {
  for (Index i = 0; i <= instance.n(); ++i) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", position(coords[i])}}},
                        {"properties",
                         {{"index", i},
                          {"name", instance.names[i]},
                          {"role", i == depot ? "depot" : "township"},
                          {"demand", instance.demand[i]}}}});
  }
}

struct DistinctTour {
  std::vector<Index> stops;
  std::vector<Count> exams_by_stop;
  std::vector<std::size_t> schedule_tours;
};

std::vector<DistinctTour> distinct_tours(const Schedule& schedule) {
  std::vector<DistinctTour> out;
  std::map<std::vector<Index>, std::size_t> seen;
  for (std::size_t t = 0; t < schedule.tours.size(); ++t) {
    const auto& tour = schedule.tours[t];
    auto [it, inserted] = seen.emplace(tour.stops, out.size());
    if (inserted) {
      out.push_back({tour.stops, std::vector<Count>(tour.stops.size(), 0), {}});
    }
    auto& distinct = out[it->second];
    distinct.schedule_tours.push_back(t + 1);
    for (std::size_t j = 0; j < tour.stops.size() && j < tour.exams.size(); ++j) {
      distinct.exams_by_stop[j] += tour.exams[j];
    }
  }
  return out;
}

json feature_collection(json features) {
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

std::string escape_html(const std::string& text) {
  std::string out;
  for (const auto c : text) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

// JSON safe to embed in a <script> element.
std::string script_json(const json& doc) {
  const auto text = doc.dump();
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<' && i + 1 < text.size() && text[i + 1] == '/') {
      out += "<\\/";
      ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

constexpr const char* page_head = R"html(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Tour schedule</title>
<style>
body { font-family: sans-serif; margin: 0; display: flex; height: 100vh; }
#tours { width: 22em; overflow-y: auto; margin: 0; padding: 0.5em; list-style: none; border-right: 1px solid #ccc; }
#tours li { margin: 0.2em 0; }
#tours button { width: 100%; text-align: left; }
#tours button.selected { background: #2a6; color: #fff; }
#map { flex: 1; }
</style>
</head>
<body>
)html";

constexpr const char* page_script = R"html(<script>
(function () {
  const canvas = document.getElementById("map");
  const ctx = canvas.getContext("2d");
  const points = data.features.filter(f => f.geometry.type === "Point");
  const lines = data.features.filter(f => f.geometry.type === "LineString");
  const all = points.map(f => f.geometry.coordinates);
  const lons = all.map(p => p[0]), lats = all.map(p => p[1]);
  const box = [Math.min(...lons), Math.min(...lats), Math.max(...lons), Math.max(...lats)];
  let selected = null;
  function project(p) {
    const pad = 30, w = canvas.width - 2 * pad, h = canvas.height - 2 * pad;
    const sx = (box[2] - box[0]) || 1, sy = (box[3] - box[1]) || 1;
    return [pad + (p[0] - box[0]) / sx * w, pad + (box[3] - p[1]) / sy * h];
  }
  function draw() {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const f of lines) {
      const on = selected === f.properties.tour_id;
      if (selected !== null && !on) continue;
      ctx.strokeStyle = on ? "#2a6" : "rgba(40,80,160,0.25)";
      ctx.lineWidth = on ? 3 : 1;
      ctx.beginPath();
      f.geometry.coordinates.forEach((p, i) => {
        const [x, y] = project(p);
        if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
      });
      ctx.stroke();
    }
    for (const f of points) {
      const [x, y] = project(f.geometry.coordinates);
      ctx.fillStyle = f.properties.role === "depot" ? "#c22" : "#333";
      ctx.beginPath();
      ctx.arc(x, y, f.properties.role === "depot" ? 6 : 3, 0, 2 * Math.PI);
      ctx.fill();
      ctx.fillText(f.properties.name, x + 5, y - 5);
    }
  }
  document.querySelectorAll("button[data-tour]").forEach(b => {
    b.addEventListener("click", () => {
      const id = Number(b.dataset.tour);
      selected = selected === id ? null : id;
      document.querySelectorAll("button[data-tour]").forEach(o =>
        o.classList.toggle("selected", Number(o.dataset.tour) === selected));
      draw();
    });
  });
  window.addEventListener("resize", draw);
  draw();
})();
</script>
</body>
</html>
)html";

} // namespace

json export_geojson(const Schedule& schedule, const Instance& instance) {
  const auto& coords = require_coords(instance);
  json features = json::array();
  const auto tours = distinct_tours(schedule);
  for (std::size_t k = 0; k < tours.size(); ++k) {
    const auto& tour = tours[k];
    features.push_back({{"type", "Feature"},
                        {"geometry", line_geometry(tour.stops, coords)},
                        {"properties",
                         {{"tour_id", k + 1},
                          {"schedule_tours", tour.schedule_tours},
                          {"drive_minutes", travel_time(tour.stops, instance)},
                          {"stops", stop_names(tour.stops, instance)},
                          {"exams_by_stop", tour.exams_by_stop}}}});
  }
  append_points(features, instance, coords);
  return feature_collection(std::move(features));
}

json export_geojson(std::span<const BasicTour> pool, const Instance& instance) {
  const auto& coords = require_coords(instance);
  json features = json::array();
  for (std::size_t k = 0; k < pool.size(); ++k) {
    features.push_back({{"type", "Feature"},
                        {"geometry", line_geometry(pool[k].stops, coords)},
                        {"properties",
                         {{"tour_id", k + 1},
                          {"drive_minutes", travel_time(pool[k], instance)},
                          {"stops", stop_names(pool[k].stops, instance)}}}});
  }
  append_points(features, instance, coords);
  return feature_collection(std::move(features));
}

std::string export_html(const Schedule& schedule, const Instance& instance) {
  const auto geojson = export_geojson(schedule, instance);
  std::ostringstream page;
  page << page_head << "<ul id=\"tours\">\n";
  for (const auto& feature : geojson["features"]) {
    if (feature["geometry"]["type"] != "LineString") {
      continue;
    }
    const auto& props = feature["properties"];
    const auto id = props["tour_id"].get<std::size_t>();
    std::string route;
    for (const auto& name : props["stops"]) {
      route += (route.empty() ? "" : ", ") + name.get<std::string>();
    }
    page << "<li class=\"tour-entry\"><button data-tour=\"" << id << "\">Tour " << id << " ("
         << props["drive_minutes"].get<Minutes>() << " min drive, used "
         << props["schedule_tours"].size() << "x): " << escape_html(route)
         << "</button></li>\n";
  }
  page << "</ul>\n<canvas id=\"map\"></canvas>\n"
       << "<script>const data = " << script_json(geojson) << ";</script>\n"
       << page_script;
  return page.str();
}

} // namespace vanplan::io
