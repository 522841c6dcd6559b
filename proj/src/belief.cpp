#include "groundnav/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"

namespace groundnav {

BeliefGrid::BeliefGrid(GridGeometry geometry, std::vector<double> mass,
                       std::optional<std::vector<double>> area_weights)
    : geometry_(geometry),
      cells_(std::move(mass)),
      area_weights_(std::move(area_weights)) {
  if (cells_.size() != geometry_.cell_count()) {
    throw std::invalid_argument("belief size does not match grid geometry");
  }
  double total = 0.0;
  for (const double v : cells_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("belief cells must be finite and nonnegative");
    }
    total += v;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateUpdate("belief has no mass to normalize");
  }
  for (double& v : cells_) v /= total;
}

double BeliefGrid::sum() const {
  double s = 0.0;
  for (const double v : cells_) s += v;
  return s;
}

std::size_t BeliefGrid::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(cells_.begin(), cells_.end()) - cells_.begin());
}

Point BeliefGrid::mean() const {
  Point m;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] == 0.0) continue;
    const Point p = geometry_.cell_center(c);
    m.x += cells_[c] * p.x;
    m.y += cells_[c] * p.y;
  }
  return m;
}

double BeliefGrid::entropy() const {
  double h = 0.0;
  for (const double v : cells_) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

BeliefGrid uniform_over_area(const AreaMap& map, std::size_t area_index) {
  const auto& cells = map.cells_of(area_index);
  if (cells.empty()) {
    throw DegenerateUpdate("area '" + map.area(area_index).id +
                           "' covers zero cells at resolution " +
                           std::to_string(map.resolution()));
  }
  std::vector<double> mass(map.grid().cell_count(), 0.0);
  for (const std::size_t c : cells) mass[c] = 1.0;
  std::vector<double> weights(map.size(), 0.0);
  weights[area_index] = 1.0;
  return BeliefGrid(map.grid(), std::move(mass), std::move(weights));
}

BeliefGrid uniform_over_area(const AreaMap& map, std::string_view area_id) {
  return uniform_over_area(map, map.index_of(area_id));
}

BeliefGrid dummy_prior(const AreaMap& map) {
  std::vector<double> mass(map.grid().cell_count(), 0.0);
  for (const std::size_t c : map.boundary_cells()) mass[c] = 1.0;
  return BeliefGrid(map.grid(), std::move(mass));
}

AreaWeights gather_area_weights(std::span<const double> cells,
                                const AreaMap& map) {
  if (cells.size() != map.grid().cell_count()) {
    throw std::invalid_argument("belief size does not match map grid");
  }
  AreaWeights out;
  out.weights.assign(map.size(), 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    double s = 0.0;
    for (const std::size_t c : map.cells_of(i)) s += cells[c];
    out.weights[i] = s;
    out.captured_mass += s;
  }
  if (!(out.captured_mass > 0.0)) {
    out.degenerate = true;
    std::fill(out.weights.begin(), out.weights.end(),
              1.0 / static_cast<double>(map.size()));
    return out;
  }
  for (double& w : out.weights) w /= out.captured_mass;
  return out;
}

AreaWeights gather_area_weights(const BeliefGrid& belief, const AreaMap& map) {
  return gather_area_weights(belief.cells(), map);
}

BeliefGrid scatter_area_weights(std::span<const double> weights,
                                const AreaMap& map) {
  if (weights.size() != map.size()) {
    throw std::invalid_argument("weight vector length does not match area count");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("area weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateUpdate("all area weights are zero");

  std::vector<double> mass(map.grid().cell_count(), 0.0);
  std::vector<double> kept(map.size(), 0.0);
  double kept_total = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto& cells = map.cells_of(i);
    if (weights[i] == 0.0 || cells.empty()) continue;
    const double per_cell = weights[i] / static_cast<double>(cells.size());
    for (const std::size_t c : cells) mass[c] = per_cell;
    kept[i] = weights[i];
    kept_total += weights[i];
  }
  if (!(kept_total > 0.0)) {
    throw DegenerateUpdate("area weights fall only on areas without cells");
  }
  for (double& w : kept) w /= kept_total;
  return BeliefGrid(map.grid(), std::move(mass), std::move(kept));
}

BeliefGrid gaussian_grid(const AreaMap& map, Point center, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("gaussian variance must be positive");
  }
  const auto& grid = map.grid();
  const auto& inside = map.boundary_cells();
  // Shift exponents by the nearest cell so at least one cell is exp(0).
  double min_d2 = std::numeric_limits<double>::infinity();
  for (const std::size_t c : inside) {
    const Point d = grid.cell_center(c) - center;
    min_d2 = std::min(min_d2, dot(d, d));
  }
  std::vector<double> mass(grid.cell_count(), 0.0);
  for (const std::size_t c : inside) {
    const Point d = grid.cell_center(c) - center;
    mass[c] = std::exp(-(dot(d, d) - min_d2) / (2.0 * variance));
  }
  return BeliefGrid(grid, std::move(mass));
}

std::string to_pgm(const BeliefGrid& belief) {
  const int w = belief.width();
  const int h = belief.height();
  const double peak = belief[belief.argmax()];
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) +
                    "\n65535\n";
  const std::size_t header = out.size();
  out.resize(header + static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 2);
  std::size_t pos = header;
  for (int row = h - 1; row >= 0; --row) {
    for (int col = 0; col < w; ++col) {
      const std::size_t c = static_cast<std::size_t>(row) * static_cast<std::size_t>(w) +
                            static_cast<std::size_t>(col);
      const double scaled = peak > 0.0 ? belief[c] / peak * 65535.0 : 0.0;
      const auto v = static_cast<unsigned>(std::lround(std::clamp(scaled, 0.0, 65535.0)));
      out[pos++] = static_cast<char>((v >> 8) & 0xFF);
      out[pos++] = static_cast<char>(v & 0xFF);
    }
  }
  return out;
}

nlohmann::json to_json(const BeliefGrid& belief) {
  const auto& g = belief.geometry();
  return nlohmann::json{
      {"width", g.width},
      {"height", g.height},
      {"resolution", g.resolution},
      {"origin", {g.origin.x, g.origin.y}},
      {"row_order", "south_to_north"},
      {"cells", std::vector<double>(belief.cells().begin(), belief.cells().end())}};
}

}  // namespace groundnav
