#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/geometry.hpp"

namespace groundnav {

/// One segmented area of interest with its attribute strings.
struct Area {
  std::string id;
  std::string category;
  std::optional<std::string> subcategory;
  std::optional<std::string> name;
  Polygon polygon;  // counterclockwise, map units

  Point centroid;     // derived
  double size = 0.0;  // derived, map units^2

  /// Attribute words in the order id, category, subcategory, name.
  std::vector<std::string> attribute_tokens() const;
};

/// Orders area ids: numeric ids numerically, otherwise lexicographically,
/// numeric before non-numeric.
bool id_less(std::string_view a, std::string_view b);

/// Cell layout of the rasterized map. Row 0 is the southern (minimum y) row;
/// cell index = row * width + col.
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  Point origin;  // south-west corner of cell 0

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  Point cell_center(std::size_t index) const;
  /// Index of the cell containing `p`, if it lies on the grid.
  std::optional<std::size_t> cell_at(Point p) const;
};

struct MapOptions {
  /// Overrides the document's resolution when set.
  std::optional<double> resolution;
  /// Maximum attribute words per area.
  std::size_t token_cap = 8;
};

/// Segmented map: boundary, disjoint areas, and the derived raster.
/// Immutable after construction.
class AreaMap {
 public:
  AreaMap(Polygon boundary, std::vector<Area> areas, double resolution,
          std::size_t token_cap = 8);

  const Polygon& boundary() const { return boundary_; }
  const std::vector<Area>& areas() const { return areas_; }
  std::size_t size() const { return areas_.size(); }
  const Area& area(std::size_t index) const { return areas_.at(index); }
  double resolution() const { return grid_.resolution; }
  std::size_t token_cap() const { return token_cap_; }
  const GridGeometry& grid() const { return grid_; }
  double cell_area() const { return grid_.resolution * grid_.resolution; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws UnknownArea.
  std::size_t index_of(std::string_view id) const;

  bool in_boundary(std::size_t cell) const { return in_boundary_[cell] != 0; }
  /// Area index owning the cell, or -1.
  int area_of_cell(std::size_t cell) const { return cell_area_[cell]; }
  const std::vector<std::size_t>& cells_of(std::size_t area) const {
    return area_cells_.at(area);
  }
  const std::vector<std::size_t>& boundary_cells() const {
    return boundary_cells_;
  }

  /// Uniformly scaled frame: the boundary's bounding box maps into [0,1]^2
  /// with its longer side spanning [0,1]. Angles are preserved.
  Point normalize(Point p) const;
  /// Centroids of all areas in the normalized frame.
  const std::vector<Point>& normalized_centroids() const {
    return normalized_centroids_;
  }
  /// Boundary vertices in the normalized frame.
  const std::vector<Point>& normalized_boundary() const {
    return normalized_boundary_;
  }

  /// Area indices sorted by id_less.
  const std::vector<std::size_t>& id_order() const { return id_order_; }

  nlohmann::json to_json() const;

 private:
  Polygon boundary_;
  std::vector<Area> areas_;
  std::size_t token_cap_;
  GridGeometry grid_;
  Box box_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<unsigned char> in_boundary_;
  std::vector<int> cell_area_;
  std::vector<std::vector<std::size_t>> area_cells_;
  std::vector<std::size_t> boundary_cells_;
  std::vector<Point> normalized_centroids_;
  std::vector<Point> normalized_boundary_;
  std::vector<std::size_t> id_order_;
};

/// Parses and validates a map document.
///
/// Rejects: zero areas, duplicate ids, non-simple or zero-area polygons,
/// polygons outside the boundary, overlapping areas, and areas whose
/// attributes exceed the token cap.
AreaMap load_map(std::string_view document, const MapOptions& options = {});
AreaMap load_map(const nlohmann::json& document,
                 const MapOptions& options = {});
AreaMap load_map_file(const std::filesystem::path& path,
                      const MapOptions& options = {});

}  // namespace groundnav
