#pragma once

// Toy maps and independent reference computations shared by the tests.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "groundnav/belief.hpp"
#include "groundnav/map.hpp"
#include "groundnav/model.hpp"

namespace testing {

using nlohmann::json;

inline const std::string kOfficeMapPath = GROUNDNAV_DATA_DIR "/office_map.json";
inline const std::string kOfficeModelPath = GROUNDNAV_DATA_DIR "/office_model.json";

struct ToyArea {
  std::string id;
  std::string category;
  std::optional<std::string> subcategory;
  std::optional<std::string> name;
  std::vector<std::pair<double, double>> polygon;
};

inline json rect(double x0, double y0, double x1, double y1) {
  return json::array({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

inline json area_doc(const ToyArea& a) {
  json j{{"id", a.id}, {"category", a.category}};
  if (a.subcategory) j["subcategory"] = *a.subcategory;
  if (a.name) j["name"] = *a.name;
  json poly = json::array();
  for (auto [x, y] : a.polygon) poly.push_back({x, y});
  j["polygon"] = poly;
  return j;
}

inline std::vector<std::pair<double, double>> rect_points(double x0, double y0, double x1,
                                                          double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

inline groundnav::AreaMap make_map(const json& boundary, const std::vector<ToyArea>& areas,
                                   double resolution) {
  json doc{{"boundary", boundary}, {"resolution", resolution}, {"areas", json::array()}};
  for (const auto& a : areas) doc["areas"].push_back(area_doc(a));
  return groundnav::load_map(doc);
}

/// Two rooms side by side on a 4 x 2 floor, 16 cells each at 0.5.
inline groundnav::AreaMap two_room_map() {
  return make_map(rect(0, 0, 4, 2),
                  {{"100", "room", "meeting", "alpha", rect_points(0, 0, 2, 2)},
                   {"101", "area", "working", std::nullopt, rect_points(2, 0, 4, 2)}},
                  0.5);
}

/// 2, 3 or 4 areas in a row with a corridor strip along the north side.
inline groundnav::AreaMap row_map(int n) {
  std::vector<ToyArea> areas;
  const char* cats[] = {"room", "room", "area", "printer"};
  const char* subs[] = {"meeting", "phone", "working", ""};
  const char* names[] = {"alpha", "", "beta", ""};
  for (int i = 0; i < n; ++i) {
    ToyArea a{std::to_string(100 + i), cats[i], std::nullopt, std::nullopt,
              rect_points(3.0 * i, 0, 3.0 * i + 3, 3)};
    if (*subs[i]) a.subcategory = subs[i];
    if (*names[i]) a.name = names[i];
    areas.push_back(a);
  }
  areas.push_back({"900", "corridor", std::nullopt, std::nullopt, rect_points(0, 3, 3.0 * n, 4)});
  return make_map(rect(0, 0, 3.0 * n, 4), areas, 0.5);
}

/// Reference ray-casting containment, written independently of the library.
inline bool inside(const std::vector<std::pair<double, double>>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto [xi, yi] = poly[i];
    const auto [xj, yj] = poly[j];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
  }
  return in;
}

inline std::vector<std::pair<double, double>> points_of(const groundnav::Polygon& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& v : p) out.emplace_back(v.x, v.y);
  return out;
}

/// Per-area mass computed from cell centers with the reference containment.
inline std::vector<double> reference_gather(const groundnav::AreaMap& map,
                                            std::span<const double> cells) {
  std::vector<double> w(map.size(), 0.0);
  const auto& g = map.grid();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto p = g.cell_center(c);
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (inside(points_of(map.area(i).polygon), p.x, p.y)) w[i] += cells[c];
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Model with freshly drawn weights on `map`.
inline groundnav::ModelParams random_model(const groundnav::AreaMap& map, std::uint64_t seed) {
  return groundnav::ModelParams::create(map, {}, {}, seed);
}

inline bool normalized(const groundnav::BeliefGrid& b, double tol = 1e-6) {
  double s = 0.0;
  for (double v : b.cells()) {
    if (v < 0.0 || !std::isfinite(v)) return false;
    s += v;
  }
  return std::abs(s - 1.0) < tol;
}

}  // namespace testing
