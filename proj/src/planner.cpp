#include "groundnav/planner.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"

namespace groundnav {

AreaGraph::AreaGraph(std::vector<std::string> ids,
                     std::vector<std::pair<std::size_t, std::size_t>> edges)
    : ids_(std::move(ids)), adjacency_(ids_.size()) {
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (auto [a, b] : edges) {
    if (a >= ids_.size() || b >= ids_.size()) throw std::invalid_argument("edge references unknown node");
    if (a == b) throw std::invalid_argument("self edges are not allowed");
    unique.insert({std::min(a, b), std::max(a, b)});
  }
  edges_.assign(unique.begin(), unique.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& n : adjacency_) {
    std::sort(n.begin(), n.end(), [this](std::size_t x, std::size_t y) {
      return id_less(ids_[x], ids_[y]);
    });
  }
}

bool AreaGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto& n = adjacency_.at(a);
  return std::find(n.begin(), n.end(), b) != n.end();
}

std::size_t AreaGraph::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return i;
  }
  throw UnknownArea(std::string(id));
}

bool AreaGraph::connected() const {
  if (ids_.empty()) return true;
  std::vector<bool> seen(ids_.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const std::size_t v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == ids_.size();
}

nlohmann::json AreaGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : edges_) edges.push_back({ids_[a], ids_[b]});
  return {{"nodes", ids_}, {"edges", edges}};
}

AreaGraph build_adjacency(const AreaMap& map, std::optional<double> gap_tolerance) {
  const double tol = gap_tolerance.value_or(map.resolution());
  if (!(tol >= 0.0)) throw std::invalid_argument("gap tolerance must be nonnegative");
  std::vector<std::string> ids;
  for (const Area& a : map.areas()) ids.push_back(a.id);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Box bi = bounding_box(map.area(i).polygon);
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      const Box bj = bounding_box(map.area(j).polygon);
      if (bi.min.x > bj.max.x + tol || bj.min.x > bi.max.x + tol ||
          bi.min.y > bj.max.y + tol || bj.min.y > bi.max.y + tol) {
        continue;
      }
      if (shared_boundary_length(map.area(i).polygon, map.area(j).polygon, tol) > tol) {
        edges.emplace_back(i, j);
      }
    }
  }
  return AreaGraph(std::move(ids), std::move(edges));
}

std::vector<std::string> dfs_plan(const AreaGraph& graph, std::string_view start,
                                  std::string_view goal) {
  return plan_path(graph, start, goal, PlanStrategy::DepthFirst);
}

std::vector<std::string> plan_path(const AreaGraph& graph, std::string_view start,
                                   std::string_view goal, PlanStrategy strategy) {
  const std::size_t s = graph.index_of(start);
  const std::size_t g = graph.index_of(goal);
  std::vector<std::size_t> parent(graph.size(), graph.size());
  std::vector<bool> seen(graph.size(), false);
  bool found = s == g;
  seen[s] = true;

  if (strategy == PlanStrategy::DepthFirst) {
    // Iterative DFS with explicit neighbour cursors, preserving recursive order.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    while (!stack.empty() && !found) {
      auto& [u, next] = stack.back();
      const auto& nbrs = graph.neighbors(u);
      if (next == nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t v = nbrs[next++];
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = u;
      if (v == g) {
        found = true;
      } else {
        stack.push_back({v, 0});
      }
    }
  } else {
    std::deque<std::size_t> queue{s};
    while (!queue.empty() && !found) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const std::size_t v : graph.neighbors(u)) {
        if (seen[v]) continue;
        seen[v] = true;
        parent[v] = u;
        if (v == g) {
          found = true;
          break;
        }
        queue.push_back(v);
      }
    }
  }
  if (!found) {
    throw Unreachable("no path from area " + std::string(start) + " to area " +
                      std::string(goal));
  }
  std::vector<std::string> path;
  for (std::size_t v = g; v != s; v = parent[v]) path.push_back(graph.ids()[v]);
  path.push_back(graph.ids()[s]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::string check_plan(const AreaGraph& graph, const std::vector<std::string>& plan,
                       std::string_view start, std::string_view goal) {
  if (plan.empty()) return "plan is empty";
  if (plan.front() != start) return "plan does not start at " + std::string(start);
  if (plan.back() != goal) return "plan does not end at " + std::string(goal);
  std::set<std::string> visited;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (!visited.insert(plan[i]).second) return "area " + plan[i] + " visited twice";
    if (i > 0) {
      std::size_t a = 0, b = 0;
      try {
        a = graph.index_of(plan[i - 1]);
        b = graph.index_of(plan[i]);
      } catch (const UnknownArea& e) {
        return e.what();
      }
      if (!graph.adjacent(a, b)) return plan[i - 1] + " and " + plan[i] + " are not adjacent";
    }
  }
  return {};
}

nlohmann::json plan_to_json(const std::vector<std::string>& plan) { return plan; }

std::string plan_overlay_pgm(const AreaMap& map, const std::vector<std::string>& plan) {
  const GridGeometry& g = map.grid();
  std::vector<unsigned char> shade(map.size(), 64);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const std::size_t a = map.index_of(plan[i]);
    shade[a] = i == 0 ? 224 : (i + 1 == plan.size() ? 255 : 160);
  }
  std::string out = "P5\n" + std::to_string(g.width) + " " + std::to_string(g.height) + "\n255\n";
  for (int row = g.height - 1; row >= 0; --row) {
    for (int col = 0; col < g.width; ++col) {
      const auto cell = static_cast<std::size_t>(row) * static_cast<std::size_t>(g.width) +
                        static_cast<std::size_t>(col);
      const int area = map.area_of_cell(cell);
      unsigned char v = 0;
      if (area >= 0) {
        v = shade[static_cast<std::size_t>(area)];
      } else if (map.in_boundary(cell)) {
        v = 32;
      }
      out.push_back(static_cast<char>(v));
    }
  }
  return out;
}

}  // namespace groundnav
