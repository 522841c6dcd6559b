#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "groundnav/belief.hpp"
#include "groundnav/compass.hpp"
#include "groundnav/error.hpp"
#include "groundnav/geometry.hpp"
#include "groundnav/map.hpp"
#include "support.hpp"

using namespace groundnav;
using namespace testing;

TEST_CASE("load_map builds a three area office") {
  const AreaMap map = make_map(
      rect(0, 0, 6, 2),
      {{"100", "room", "meeting", "alpha", rect_points(0, 0, 2, 2)},
       {"101", "room", "phone", std::nullopt, rect_points(2, 0, 4, 2)},
       {"102", "exit", std::nullopt, std::nullopt, rect_points(4, 0, 6, 2)}},
      0.5);
  CHECK(map.size() == 3);
  CHECK(map.area(0).centroid.x == doctest::Approx(1.0));
  CHECK(map.area(2).centroid.y == doctest::Approx(1.0));
  CHECK(map.area(1).size == doctest::Approx(4.0));
  CHECK(map.grid().width == 12);
  CHECK(map.grid().height == 4);
}

TEST_CASE("load_map rejects invalid documents") {
  SUBCASE("duplicate id") {
    CHECK_THROWS_AS(make_map(rect(0, 0, 4, 2),
                             {{"100", "room", {}, {}, rect_points(0, 0, 2, 2)},
                              {"100", "room", {}, {}, rect_points(2, 0, 4, 2)}},
                             0.5),
                    MapError);
  }
  SUBCASE("outside the boundary") {
    CHECK_THROWS_AS(make_map(rect(0, 0, 4, 2), {{"1", "room", {}, {}, rect_points(3, 0, 5, 2)}}, 0.5),
                    MapError);
  }
  SUBCASE("self intersecting") {
    CHECK_THROWS_AS(
        make_map(rect(0, 0, 4, 4), {{"1", "room", {}, {}, {{0, 0}, {2, 2}, {2, 0}, {0, 2}}}}, 0.5),
        MapError);
  }
  SUBCASE("overlap") {
    CHECK_THROWS_AS(make_map(rect(0, 0, 4, 2),
                             {{"1", "room", {}, {}, rect_points(0, 0, 2, 2)},
                              {"2", "room", {}, {}, rect_points(1, 0, 3, 2)}},
                             0.5),
                    MapError);
  }
  SUBCASE("zero areas") { CHECK_THROWS_AS(make_map(rect(0, 0, 4, 2), {}, 0.5), MapError); }
  SUBCASE("malformed text") { CHECK_THROWS_AS(load_map(std::string_view("{\"boundary\":")), MapError); }
}

TEST_CASE("shipped office map") {
  const AreaMap map = load_map_file(kOfficeMapPath);
  CHECK(map.size() == 80);
  CHECK(map.grid().width == 100);
  CHECK(map.grid().height == 60);
  for (std::size_t i = 0; i < map.size(); ++i) CHECK_FALSE(map.cells_of(i).empty());
  CHECK(id_less("99", "100"));
  CHECK(id_less("100", "abc"));
  CHECK_FALSE(id_less("100", "100"));
}

TEST_CASE("uniform_over_area") {
  SUBCASE("unit square covering four cells") {
    const AreaMap map = make_map(rect(0, 0, 2, 2), {{"1", "room", {}, {}, rect_points(0, 0, 1, 1)}}, 0.5);
    const BeliefGrid b = uniform_over_area(map, "1");
    int nonzero = 0;
    for (double v : b.cells()) {
      if (v > 0) {
        ++nonzero;
        CHECK(v == doctest::Approx(0.25));
      }
    }
    CHECK(nonzero == 4);
  }
  SUBCASE("L shape against the reference containment count") {
    const std::vector<std::pair<double, double>> l = {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 5}, {0, 5}};
    const AreaMap map = make_map(rect(0, 0, 5, 5), {{"1", "room", {}, {}, l}}, 1.0);
    int expected = 0;
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) expected += inside(l, c + 0.5, r + 0.5);
    }
    REQUIRE(expected == 7);
    const BeliefGrid b = uniform_over_area(map, "1");
    for (std::size_t c = 0; c < b.size(); ++c) {
      const auto p = map.grid().cell_center(c);
      CHECK(b[c] == doctest::Approx(inside(l, p.x, p.y) ? 1.0 / 7.0 : 0.0));
    }
  }
  SUBCASE("unknown id") {
    CHECK_THROWS_AS(uniform_over_area(two_room_map(), "999"), UnknownArea);
  }
}

TEST_CASE("dummy_prior") {
  SUBCASE("full square") {
    const AreaMap map = make_map(rect(0, 0, 10, 10), {{"1", "room", {}, {}, rect_points(0, 0, 1, 1)}}, 1.0);
    const BeliefGrid b = dummy_prior(map);
    for (double v : b.cells()) CHECK(v == doctest::Approx(0.01));
  }
  SUBCASE("boundary masking forty cells") {
    const std::vector<std::pair<double, double>> outline = {{0, 0}, {10, 0}, {10, 5}, {2, 5}, {2, 10}, {0, 10}};
    json boundary = json::array();
    for (auto [x, y] : outline) boundary.push_back({x, y});
    const AreaMap map = make_map(boundary, {{"1", "room", {}, {}, rect_points(0, 0, 1, 1)}}, 1.0);
    const BeliefGrid b = dummy_prior(map);
    REQUIRE(b.size() == 100);
    int interior = 0;
    for (std::size_t c = 0; c < b.size(); ++c) {
      const auto p = map.grid().cell_center(c);
      if (inside(outline, p.x, p.y)) {
        ++interior;
        CHECK(b[c] == doctest::Approx(1.0 / 60.0));
      } else {
        CHECK(b[c] == 0.0);
      }
    }
    CHECK(interior == 60);
    CHECK(b.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("gather_area_weights") {
  SUBCASE("uniform over one area") {
    const AreaMap map = two_room_map();
    const AreaWeights w = gather_area_weights(uniform_over_area(map, "100"), map);
    CHECK(w.weights[0] == doctest::Approx(1.0));
    CHECK(w.weights[1] == 0.0);
    CHECK_FALSE(w.degenerate);
  }
  SUBCASE("dummy prior over 30 and 10 cells") {
    const AreaMap map = make_map(rect(0, 0, 10, 4),
                                 {{"1", "room", {}, {}, rect_points(0, 0, 10, 3)},
                                  {"2", "room", {}, {}, rect_points(0, 3, 10, 4)}},
                                 1.0);
    const AreaWeights w = gather_area_weights(dummy_prior(map), map);
    CHECK(w.weights[0] == doctest::Approx(0.75));
    CHECK(w.weights[1] == doctest::Approx(0.25));
  }
  SUBCASE("mass outside every area is degenerate") {
    const AreaMap bare = make_map(rect(0, 0, 6, 4),
                                  {{"100", "room", {}, {}, rect_points(0, 0, 3, 3)},
                                   {"101", "room", {}, {}, rect_points(3, 0, 6, 3)}},
                                  0.5);
    std::vector<double> cells(bare.grid().cell_count(), 0.0);
    cells[*bare.grid().cell_at({1.0, 3.5})] = 1.0;
    const AreaWeights w = gather_area_weights(cells, bare);
    CHECK(w.degenerate);
    CHECK(w.captured_mass == 0.0);
    CHECK(w.weights[0] == doctest::Approx(0.5));
    CHECK(w.weights[1] == doctest::Approx(0.5));
  }
}

TEST_CASE("scatter_area_weights") {
  const AreaMap map = make_map(rect(0, 0, 10, 1),
                               {{"1", "room", {}, {}, rect_points(0, 0, 2, 1)},
                                {"2", "room", {}, {}, rect_points(2, 0, 10, 1)}},
                               1.0);
  SUBCASE("unit weight reproduces uniform_over_area") {
    const std::vector<double> w = {1.0, 0.0};
    CHECK(scatter_area_weights(w, map) == uniform_over_area(map, "1"));
  }
  SUBCASE("half and half over 2 and 8 cells") {
    const std::vector<double> w = {0.5, 0.5};
    const BeliefGrid b = scatter_area_weights(w, map);
    for (std::size_t c = 0; c < 10; ++c) CHECK(b[c] == doctest::Approx(c < 2 ? 0.25 : 0.0625));
  }
  SUBCASE("round trip") {
    const BeliefGrid u = uniform_over_area(map, "2");
    CHECK(scatter_area_weights(gather_area_weights(u, map).weights, map) == u);
  }
  SUBCASE("all zero") {
    const std::vector<double> w = {0.0, 0.0};
    CHECK_THROWS_AS(scatter_area_weights(w, map), DegenerateUpdate);
  }
}

TEST_CASE("gather after scatter is the identity on random weights") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 4; ++n) {
    const AreaMap map = row_map(n);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> w(map.size());
      for (double& v : w) v = u(rng);
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (double& v : w) v /= total;
      const auto back = gather_area_weights(scatter_area_weights(w, map), map).weights;
      for (std::size_t i = 0; i < w.size(); ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("gaussian_grid") {
  const AreaMap map = make_map(rect(0, 0, 20, 20), {{"1", "room", {}, {}, rect_points(9, 9, 11, 11)}}, 0.5);
  SUBCASE("pointwise density with variance 4") {
    const Point center{10.0, 10.0};
    const BeliefGrid b = gaussian_grid(map, center, 4.0);
    std::vector<double> ref(b.size());
    double total = 0.0;
    for (std::size_t c = 0; c < ref.size(); ++c) {
      const auto p = map.grid().cell_center(c);
      const double d2 = (p.x - center.x) * (p.x - center.x) + (p.y - center.y) * (p.y - center.y);
      ref[c] = std::exp(-d2 / 8.0) / (2.0 * kPi * 4.0);
      total += ref[c];
    }
    for (std::size_t c = 0; c < ref.size(); ++c) CHECK(b[c] == doctest::Approx(ref[c] / total).epsilon(1e-12));
  }
  SUBCASE("argmax is the cell nearest the center") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 19.7);
    for (int trial = 0; trial < 100; ++trial) {
      const Point center{u(rng), u(rng)};
      const BeliefGrid b = gaussian_grid(map, center, 2.0);
      std::size_t nearest = 0;
      double best = 1e300;
      for (std::size_t c = 0; c < b.size(); ++c) {
        const double d = distance(map.grid().cell_center(c), center);
        if (d < best - 1e-12) {
          best = d;
          nearest = c;
        }
      }
      CHECK(b.argmax() == nearest);
    }
  }
  SUBCASE("truncated near the boundary stays normalized") {
    CHECK(normalized(gaussian_grid(map, {0.1, 0.1}, 9.0)));
  }
  SUBCASE("nonpositive variance") {
    CHECK_THROWS_AS(gaussian_grid(map, {1, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_grid(map, {1, 1}, -1.0), std::invalid_argument);
  }
}

TEST_CASE("belief grid construction and export") {
  const AreaMap map = two_room_map();
  std::vector<double> cells(map.grid().cell_count(), 2.0);
  const BeliefGrid b(map.grid(), cells);
  CHECK(normalized(b));
  CHECK_THROWS_AS(BeliefGrid(map.grid(), std::vector<double>(cells.size(), 0.0)), DegenerateUpdate);
  cells[3] = -1.0;
  CHECK_THROWS_AS(BeliefGrid(map.grid(), cells), std::invalid_argument);
  const std::string pgm = to_pgm(uniform_over_area(map, "101"));
  CHECK(pgm.rfind("P5\n8 4\n65535\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n8 4\n65535\n").size() + 2 * 32);
  const auto j = to_json(b);
  CHECK(j["width"] == 8);
  CHECK(j["cells"].size() == 32);
  CHECK(j["row_order"] == "south_to_north");
}

TEST_CASE("geometry helpers") {
  const Polygon sq = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(signed_area(sq) == doctest::Approx(4.0));
  CHECK(centroid(sq) == Point{1, 1});
  CHECK(contains_even_odd(sq, {1, 1}));
  CHECK_FALSE(contains_even_odd(sq, {3, 1}));
  const Polygon right = {{2, 0}, {4, 0}, {4, 2}, {2, 2}};
  CHECK(shared_boundary_length(sq, right, 1e-6) == doctest::Approx(2.0));
  CHECK_FALSE(interiors_overlap(sq, right));
  CHECK(is_simple(sq));
  CHECK_FALSE(is_simple(Polygon{{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
}
