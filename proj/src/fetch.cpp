#include <cmath>
#include <regex>
#include <sstream>

#include "httplib.h"
#include "vanplan/errors.h"
#include "vanplan/io.h"

namespace vanplan::io {

Matrix durations_to_minutes(const json& reply, std::size_t size) {
  if (!reply.is_object() || !reply.contains("durations")) {
    throw MalformedResponse("reply has no 'durations' member");
  }
  const auto& rows = reply["durations"];
  if (!rows.is_array() || rows.size() != size) {
    std::ostringstream msg;
    msg << "expected " << size << " duration rows, got "
        << (rows.is_array() ? rows.size() : 0);
    throw MalformedResponse(msg.str());
  }
  Matrix out(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!rows[i].is_array() || rows[i].size() != size) {
      std::ostringstream msg;
      msg << "duration row " << i << " does not have " << size << " entries";
      throw MalformedResponse(msg.str());
    }
    for (std::size_t j = 0; j < size; ++j) {
      const auto& cell = rows[i][j];
      if (!cell.is_number() || cell.get<double>() < 0) {
        std::ostringstream msg;
        msg << "duration [" << i << "][" << j << "] is not a non-negative number";
        throw MalformedResponse(msg.str());
      }
      out(i, j) = i == j ? 0 : static_cast<Minutes>(std::ceil(cell.get<double>() / 60.0));
    }
  }
  return out;
}

Matrix fetch_distance_matrix(const std::string& endpoint, std::span<const Coord> coords) {
  if (coords.empty()) {
    throw NetworkError("no coordinates to query");
  }
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch parts;
  if (!std::regex_match(endpoint, parts, url)) {
    throw NetworkError("endpoint must look like http://host[:port][/path]: " + endpoint);
  }
  auto path = parts[2].matched ? parts[2].str() : std::string();
  if (path.empty() || path.back() != '/') {
    path += '/';
  }
  std::ostringstream locations;
  locations.precision(7);
  locations << std::fixed;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    locations << (i == 0 ? "" : ";") << coords[i].lon << ',' << coords[i].lat;
  }
  path += locations.str() + "?annotations=duration";

  httplib::Client client(parts[1].str());
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  const auto result = client.Get(path);
  if (!result) {
    throw NetworkError("request to " + endpoint + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw NetworkError("request to " + endpoint + " returned HTTP " +
                       std::to_string(result->status));
  }
  json reply;
  try {
    reply = json::parse(result->body);
  } catch (const json::parse_error& e) {
    throw MalformedResponse(std::string("reply is not JSON: ") + e.what());
  }
  return durations_to_minutes(reply, coords.size());
}

} // namespace vanplan::io
