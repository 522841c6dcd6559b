#include "groundnav/map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"
#include "groundnav/text.hpp"

namespace groundnav {

using nlohmann::json;

std::vector<std::string> Area::attribute_tokens() const {
  std::vector<std::string> tokens = split_words(id);
  for (const auto& w : split_words(category)) tokens.push_back(w);
  if (subcategory) {
    for (const auto& w : split_words(*subcategory)) tokens.push_back(w);
  }
  if (name) {
    for (const auto& w : split_words(*name)) tokens.push_back(w);
  }
  return tokens;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

std::string_view strip_leading_zeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

}  // namespace

bool id_less(std::string_view a, std::string_view b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na && nb) {
    const auto sa = strip_leading_zeros(a);
    const auto sb = strip_leading_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
  }
  if (na != nb) return na;
  return a < b;
}

Point GridGeometry::cell_center(std::size_t index) const {
  const auto w = static_cast<std::size_t>(width);
  const double col = static_cast<double>(index % w);
  const double row = static_cast<double>(index / w);
  return {origin.x + (col + 0.5) * resolution,
          origin.y + (row + 0.5) * resolution};
}

std::optional<std::size_t> GridGeometry::cell_at(Point p) const {
  const double col = std::floor((p.x - origin.x) / resolution);
  const double row = std::floor((p.y - origin.y) / resolution);
  if (col < 0 || row < 0 || col >= width || row >= height) return std::nullopt;
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
         static_cast<std::size_t>(col);
}

AreaMap::AreaMap(Polygon boundary, std::vector<Area> areas, double resolution,
                 std::size_t token_cap)
    : boundary_(std::move(boundary)),
      areas_(std::move(areas)),
      token_cap_(token_cap) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw MapError("resolution must be positive");
  }
  if (areas_.empty()) throw MapError("map has zero areas");
  if (boundary_.size() < 3 || !is_simple(boundary_)) {
    throw MapError("map boundary is not a simple polygon");
  }
  if (signed_area(boundary_) < 0) std::reverse(boundary_.begin(), boundary_.end());
  if (signed_area(boundary_) <= 0) throw MapError("map boundary has zero area");

  for (std::size_t i = 0; i < areas_.size(); ++i) {
    Area& a = areas_[i];
    if (a.id.empty()) throw MapError("area with empty id");
    if (!index_.emplace(a.id, i).second) {
      throw MapError("duplicate area id '" + a.id + "'");
    }
    if (a.polygon.size() < 3 || !is_simple(a.polygon)) {
      throw MapError("area '" + a.id + "' polygon is self-intersecting");
    }
    if (signed_area(a.polygon) < 0) {
      std::reverse(a.polygon.begin(), a.polygon.end());
    }
    a.size = signed_area(a.polygon);
    if (!(a.size > 0.0)) throw MapError("area '" + a.id + "' has zero area");
    a.centroid = centroid(a.polygon);
    if (!polygon_within(a.polygon, boundary_)) {
      throw MapError("area '" + a.id + "' lies outside the map boundary");
    }
    const auto tokens = a.attribute_tokens();
    if (tokens.size() > token_cap_) {
      throw MapError("area '" + a.id + "' has " + std::to_string(tokens.size()) +
                     " attribute words, cap is " + std::to_string(token_cap_));
    }
  }
  for (std::size_t i = 0; i < areas_.size(); ++i) {
    for (std::size_t j = i + 1; j < areas_.size(); ++j) {
      if (interiors_overlap(areas_[i].polygon, areas_[j].polygon)) {
        throw MapError("areas '" + areas_[i].id + "' and '" + areas_[j].id +
                       "' overlap");
      }
    }
  }

  box_ = bounding_box(boundary_);
  grid_.resolution = resolution;
  grid_.origin = box_.min;
  grid_.width = std::max(1, static_cast<int>(std::ceil(box_.width() / resolution - 1e-9)));
  grid_.height = std::max(1, static_cast<int>(std::ceil(box_.height() / resolution - 1e-9)));

  const std::size_t cells = grid_.cell_count();
  in_boundary_.assign(cells, 0);
  cell_area_.assign(cells, -1);
  area_cells_.assign(areas_.size(), {});
  std::vector<Box> boxes;
  boxes.reserve(areas_.size());
  for (const Area& a : areas_) boxes.push_back(bounding_box(a.polygon));

  for (std::size_t c = 0; c < cells; ++c) {
    const Point p = grid_.cell_center(c);
    if (!contains_even_odd(boundary_, p)) continue;
    in_boundary_[c] = 1;
    boundary_cells_.push_back(c);
    for (std::size_t i = 0; i < areas_.size(); ++i) {
      const Box& b = boxes[i];
      if (p.x < b.min.x || p.x > b.max.x || p.y < b.min.y || p.y > b.max.y) {
        continue;
      }
      if (contains_even_odd(areas_[i].polygon, p)) {
        if (cell_area_[c] >= 0) {
          throw MapError("areas '" + areas_[static_cast<std::size_t>(cell_area_[c])].id +
                         "' and '" + areas_[i].id + "' overlap");
        }
        cell_area_[c] = static_cast<int>(i);
        area_cells_[i].push_back(c);
      }
    }
  }
  if (boundary_cells_.empty()) {
    throw MapError("map boundary covers zero cells at this resolution");
  }

  for (const Area& a : areas_) {
    normalized_centroids_.push_back(normalize(a.centroid));
  }
  for (const Point& p : boundary_) normalized_boundary_.push_back(normalize(p));

  id_order_.resize(areas_.size());
  for (std::size_t i = 0; i < id_order_.size(); ++i) id_order_[i] = i;
  std::sort(id_order_.begin(), id_order_.end(), [&](std::size_t a, std::size_t b) {
    return id_less(areas_[a].id, areas_[b].id);
  });
}

std::optional<std::size_t> AreaMap::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AreaMap::index_of(std::string_view id) const {
  const auto found = find(id);
  if (!found) throw UnknownArea(std::string(id));
  return *found;
}

Point AreaMap::normalize(Point p) const {
  const double scale = std::max(box_.width(), box_.height());
  return {(p.x - box_.min.x) / scale, (p.y - box_.min.y) / scale};
}

namespace {

json polygon_to_json(const Polygon& poly) {
  json out = json::array();
  for (const Point& p : poly) out.push_back({p.x, p.y});
  return out;
}

Polygon polygon_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw MapError(what + ": vertex list must be an array");
  Polygon poly;
  for (const json& v : j) {
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      poly.push_back({v[0].get<double>(), v[1].get<double>()});
    } else if (v.is_object() && v.contains("x") && v.contains("y")) {
      poly.push_back({v.at("x").get<double>(), v.at("y").get<double>()});
    } else {
      throw MapError(what + ": vertices must be [x, y] pairs");
    }
  }
  return poly;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) throw MapError(std::string("field '") + key + "' must be a string");
  std::string s = j.at(key).get<std::string>();
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

json AreaMap::to_json() const {
  json areas = json::array();
  for (const Area& a : areas_) {
    json j{{"id", a.id}, {"category", a.category}};
    if (a.subcategory) j["subcategory"] = *a.subcategory;
    if (a.name) j["name"] = *a.name;
    j["polygon"] = polygon_to_json(a.polygon);
    areas.push_back(std::move(j));
  }
  return json{{"boundary", polygon_to_json(boundary_)},
              {"resolution", grid_.resolution},
              {"areas", std::move(areas)}};
}

AreaMap load_map(const json& doc, const MapOptions& options) {
  if (!doc.is_object()) throw MapError("map document must be a JSON object");
  if (!doc.contains("boundary")) throw MapError("map document lacks 'boundary'");
  if (!doc.contains("areas") || !doc.at("areas").is_array()) {
    throw MapError("map document lacks an 'areas' array");
  }
  double resolution = 0.5;
  if (doc.contains("resolution")) {
    if (!doc.at("resolution").is_number()) throw MapError("'resolution' must be a number");
    resolution = doc.at("resolution").get<double>();
  }
  if (options.resolution) resolution = *options.resolution;

  Polygon boundary = polygon_from_json(doc.at("boundary"), "boundary");
  std::vector<Area> areas;
  for (const json& ja : doc.at("areas")) {
    if (!ja.is_object()) throw MapError("area entries must be objects");
    Area a;
    if (!ja.contains("id")) throw MapError("area lacks 'id'");
    const json& id = ja.at("id");
    if (id.is_string()) {
      a.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      a.id = std::to_string(id.get<long long>());
    } else {
      throw MapError("area 'id' must be a string");
    }
    if (!ja.contains("category") || !ja.at("category").is_string()) {
      throw MapError("area '" + a.id + "' lacks a string 'category'");
    }
    a.category = ja.at("category").get<std::string>();
    a.subcategory = optional_string(ja, "subcategory");
    a.name = optional_string(ja, "name");
    if (!ja.contains("polygon")) throw MapError("area '" + a.id + "' lacks 'polygon'");
    a.polygon = polygon_from_json(ja.at("polygon"), "area '" + a.id + "'");
    areas.push_back(std::move(a));
  }
  return AreaMap(std::move(boundary), std::move(areas), resolution,
                 options.token_cap);
}

AreaMap load_map(std::string_view document, const MapOptions& options) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw MapError(std::string("map document is not valid JSON: ") + e.what());
  }
  try {
    return load_map(doc, options);
  } catch (const json::exception& e) {
    throw MapError(std::string("malformed map document: ") + e.what());
  }
}

AreaMap load_map_file(const std::filesystem::path& path,
                      const MapOptions& options) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open map file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return load_map(std::string_view(text), options);
}

}  // namespace groundnav
