#include <doctest.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <random>

#include "groundnav/error.hpp"
#include "groundnav/planner.hpp"
#include "support.hpp"

using namespace groundnav;
using namespace testing;

namespace {

const AreaMap& office() {
  static const AreaMap map = load_map_file(kOfficeMapPath);
  return map;
}

// Line graph a0 - a1 - ... - a(n-1).
AreaGraph line_graph(int n) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (int i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return AreaGraph(ids, edges);
}

std::size_t bfs_hops(const AreaGraph& g, std::size_t s, std::size_t t) {
  std::vector<std::size_t> dist(g.size(), SIZE_MAX);
  std::deque<std::size_t> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : g.neighbors(u)) {
      if (dist[v] == SIZE_MAX) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist[t];
}

// Plain recursive DFS over neighbours sorted by id.
std::vector<std::string> reference_dfs(const AreaGraph& g, std::size_t s, std::size_t t) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> path;
  std::function<bool(std::size_t)> visit = [&](std::size_t u) {
    seen[u] = true;
    path.push_back(u);
    if (u == t) return true;
    std::vector<std::size_t> nbrs;
    for (const auto& [a, b] : g.edges()) {
      if (a == u) nbrs.push_back(b);
      if (b == u) nbrs.push_back(a);
    }
    std::sort(nbrs.begin(), nbrs.end(),
              [&](std::size_t x, std::size_t y) { return id_less(g.ids()[x], g.ids()[y]); });
    for (std::size_t v : nbrs) {
      if (!seen[v] && visit(v)) return true;
    }
    path.pop_back();
    return false;
  };
  visit(s);
  std::vector<std::string> out;
  for (std::size_t i : path) out.push_back(g.ids()[i]);
  return out;
}

}  // namespace

TEST_CASE("adjacency from shared boundaries") {
  const AreaMap touching = make_map(rect(0, 0, 4, 2),
                                    {{"1", "room", {}, {}, rect_points(0, 0, 2, 2)},
                                     {"2", "room", {}, {}, rect_points(2, 0, 4, 2)}},
                                    0.5);
  CHECK(build_adjacency(touching).edges().size() == 1);
  const AreaMap apart = make_map(rect(0, 0, 6, 2),
                                 {{"1", "room", {}, {}, rect_points(0, 0, 2, 2)},
                                  {"2", "room", {}, {}, rect_points(4, 0, 6, 2)}},
                                 0.5);
  CHECK(build_adjacency(apart).edges().empty());
  // Only a corner in common.
  const AreaMap corner = make_map(rect(0, 0, 4, 4),
                                  {{"1", "room", {}, {}, rect_points(0, 0, 2, 2)},
                                   {"2", "room", {}, {}, rect_points(2, 2, 4, 4)}},
                                  0.5);
  CHECK(build_adjacency(corner).edges().empty());
  const AreaGraph row = build_adjacency(row_map(4));
  CHECK(row.connected());
  CHECK(row.adjacent(row.index_of("100"), row.index_of("101")));
  CHECK(row.adjacent(row.index_of("103"), row.index_of("900")));
  CHECK_FALSE(row.adjacent(row.index_of("100"), row.index_of("102")));
  CHECK(build_adjacency(office()).connected());
}

TEST_CASE("plans on a line") {
  const AreaGraph g = line_graph(5);
  CHECK(dfs_plan(g, "a2", "a2") == std::vector<std::string>{"a2"});
  CHECK(dfs_plan(g, "a0", "a4") == std::vector<std::string>{"a0", "a1", "a2", "a3", "a4"});
  CHECK(dfs_plan(g, "a3", "a1") == std::vector<std::string>{"a3", "a2", "a1"});
  CHECK_THROWS_AS(dfs_plan(g, "a0", "zz"), UnknownArea);
  const AreaGraph split({"x", "y", "z"}, {{0, 1}});
  CHECK_THROWS_AS(dfs_plan(split, "x", "z"), Unreachable);
  CHECK_FALSE(split.connected());
}

TEST_CASE("depth first follows id order") {
  // Two routes 1-10-4 and 1-9-4. Numeric ids sort numerically, so 9 wins.
  const AreaGraph g({"1", "10", "9", "4"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(dfs_plan(g, "1", "4") == std::vector<std::string>{"1", "9", "4"});
  CHECK(reference_dfs(g, 0, 3) == std::vector<std::string>{"1", "9", "4"});
}

TEST_CASE("office plans match reference searches") {
  const AreaGraph g = build_adjacency(office());
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int i = 0; i < 200; ++i) {
    const std::size_t s = pick(rng), t = pick(rng);
    const auto& a = g.ids()[s];
    const auto& b = g.ids()[t];
    const auto dfs = dfs_plan(g, a, b);
    CHECK(check_plan(g, dfs, a, b).empty());
    CHECK(dfs == reference_dfs(g, s, t));
    const auto bfs = plan_path(g, a, b, PlanStrategy::BreadthFirst);
    CHECK(check_plan(g, bfs, a, b).empty());
    CHECK(bfs.size() == bfs_hops(g, s, t) + 1);
  }
}

TEST_CASE("check_plan names violations") {
  const AreaGraph g = line_graph(4);
  CHECK(check_plan(g, {"a0", "a1"}, "a0", "a1").empty());
  CHECK_FALSE(check_plan(g, {}, "a0", "a1").empty());
  CHECK_FALSE(check_plan(g, {"a1", "a2"}, "a0", "a2").empty());
  CHECK_FALSE(check_plan(g, {"a0", "a2"}, "a0", "a2").empty());
  CHECK_FALSE(check_plan(g, {"a0", "a1", "a0", "a1"}, "a0", "a1").empty());
  CHECK_FALSE(check_plan(g, {"a0", "q"}, "a0", "q").empty());
}

TEST_CASE("plan overlay") {
  const AreaMap map = row_map(3);
  const auto plan = dfs_plan(build_adjacency(map), "100", "102");
  const std::string pgm = plan_overlay_pgm(map, plan);
  const std::string header = "P5\n" + std::to_string(map.grid().width) + " " +
                             std::to_string(map.grid().height) + "\n255\n";
  REQUIRE(pgm.rfind(header, 0) == 0);
  CHECK(pgm.size() == header.size() + map.grid().cell_count());
  const auto px = [&](double x, double y) {
    const std::size_t cell = *map.grid().cell_at({x, y});
    const int row = static_cast<int>(cell) / map.grid().width;
    const int col = static_cast<int>(cell) % map.grid().width;
    const int flipped = (map.grid().height - 1 - row) * map.grid().width + col;
    return static_cast<unsigned char>(pgm[header.size() + static_cast<std::size_t>(flipped)]);
  };
  CHECK(px(1.0, 1.0) == 224);
  CHECK(px(7.0, 1.0) == 255);
  CHECK(px(4.0, 1.0) == (plan.size() > 2 && plan[1] == "101" ? 160 : 64));
  CHECK(plan_to_json(plan).size() == plan.size());
}
