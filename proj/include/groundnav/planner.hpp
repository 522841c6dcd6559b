#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/map.hpp"

namespace groundnav {

/// Undirected adjacency between areas, by area index.
class AreaGraph {
 public:
  AreaGraph(std::vector<std::string> ids,
            std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  /// Neighbours in ascending id order.
  const std::vector<std::size_t>& neighbors(std::size_t node) const {
    return adjacency_.at(node);
  }
  /// Each edge once, (lower index, higher index), sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  bool adjacent(std::size_t a, std::size_t b) const;
  /// Throws UnknownArea.
  std::size_t index_of(std::string_view id) const;
  bool connected() const;

  nlohmann::json to_json() const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Two areas are adjacent when their boundaries share more than
/// `gap_tolerance` of length, edges counted as shared when both endpoints
/// lie within `gap_tolerance` of the other edge's line. Defaults to the map
/// resolution.
AreaGraph build_adjacency(const AreaMap& map, std::optional<double> gap_tolerance = {});

enum class PlanStrategy { DepthFirst, BreadthFirst };

/// Area ids from start to goal, consecutive entries adjacent, no repeats.
/// Depth-first visits neighbours in ascending id order and returns the first
/// path found; breadth-first returns a shortest one. Throws UnknownArea or
/// Unreachable.
std::vector<std::string> dfs_plan(const AreaGraph& graph, std::string_view start,
                                  std::string_view goal);
std::vector<std::string> plan_path(const AreaGraph& graph, std::string_view start,
                                   std::string_view goal,
                                   PlanStrategy strategy = PlanStrategy::DepthFirst);

/// Empty when the plan is valid, otherwise the first violation.
std::string check_plan(const AreaGraph& graph, const std::vector<std::string>& plan,
                       std::string_view start, std::string_view goal);

nlohmann::json plan_to_json(const std::vector<std::string>& plan);

/// 8-bit PGM of the map: outside 0, corridors/other areas 64, plan areas
/// 160, start 224, goal 255. North row first.
std::string plan_overlay_pgm(const AreaMap& map, const std::vector<std::string>& plan);

}  // namespace groundnav
