#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/map.hpp"

namespace groundnav {

/// Normalized nonnegative belief over the map raster.
///
/// Grids produced by spreading area weights (uniform_over_area,
/// scatter_area_weights) remember those weights; they are the "precise"
/// beliefs that proximity and directional updates reference.
class BeliefGrid {
 public:
  /// Normalizes `mass` to unit sum. Throws DegenerateUpdate when the total
  /// is not positive, std::invalid_argument on negative or non-finite cells
  /// or a size mismatch.
  BeliefGrid(GridGeometry geometry, std::vector<double> mass,
             std::optional<std::vector<double>> area_weights = std::nullopt);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  std::size_t size() const { return cells_.size(); }
  std::span<const double> cells() const { return cells_; }
  double operator[](std::size_t cell) const { return cells_[cell]; }

  double sum() const;
  /// Lowest index among maximal cells.
  std::size_t argmax() const;
  /// Mass-weighted mean cell center.
  Point mean() const;
  /// Shannon entropy in nats.
  double entropy() const;

  const std::optional<std::vector<double>>& area_weights() const {
    return area_weights_;
  }

  friend bool operator==(const BeliefGrid& a, const BeliefGrid& b) {
    return a.geometry_.width == b.geometry_.width &&
           a.geometry_.height == b.geometry_.height && a.cells_ == b.cells_;
  }

 private:
  GridGeometry geometry_;
  std::vector<double> cells_;
  std::optional<std::vector<double>> area_weights_;
};

/// Uniform over the cells whose centers lie inside the area.
/// Throws UnknownArea, or DegenerateUpdate if the area covers no cell.
BeliefGrid uniform_over_area(const AreaMap& map, std::string_view area_id);
BeliefGrid uniform_over_area(const AreaMap& map, std::size_t area_index);

/// Uniform over every cell inside the map boundary.
BeliefGrid dummy_prior(const AreaMap& map);

struct AreaWeights {
  std::vector<double> weights;  // sums to 1
  double captured_mass = 0.0;   // belief mass inside any area, pre-normalization
  bool degenerate = false;      // no mass in any area; weights are uniform
};

/// Sums cell mass per area and normalizes. Accepts unnormalized cells.
AreaWeights gather_area_weights(std::span<const double> cells,
                                const AreaMap& map);
AreaWeights gather_area_weights(const BeliefGrid& belief, const AreaMap& map);

/// Spreads each area's weight uniformly over its cells and normalizes.
/// Throws DegenerateUpdate when no weight lands on any cell.
BeliefGrid scatter_area_weights(std::span<const double> weights,
                                const AreaMap& map);

/// Isotropic Gaussian sampled at cell centers, truncated to the boundary.
/// `variance` is per axis in map units^2. Throws std::invalid_argument for
/// variance <= 0 and DegenerateUpdate if no mass survives truncation.
BeliefGrid gaussian_grid(const AreaMap& map, Point center, double variance);

/// Binary PGM (P5), maxval 65535, north row first, value proportional to
/// cell mass with the maximal cell at 65535.
std::string to_pgm(const BeliefGrid& belief);

/// {"width","height","resolution","origin","row_order","cells"}; cells are
/// row-major starting from the southern row.
nlohmann::json to_json(const BeliefGrid& belief);

}  // namespace groundnav
