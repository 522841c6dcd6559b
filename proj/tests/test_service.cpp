#include <doctest.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"
#include "groundnav/service.hpp"
#include "support.hpp"

// httplib goes after the Eigen-using headers; the other order fails to compile.
#include <httplib.h>

using namespace groundnav;
using namespace testing;

namespace {

Service make_service(ServiceOptions options = {}) {
  return Service(load_map_file(kOfficeMapPath), ModelParams::load(kOfficeModelPath), options);
}

json body_of(const ServiceResponse& r) { return json::parse(r.body); }

json ground_body(const std::string& instruction) {
  return json{{"instruction", instruction}};
}

}  // namespace

TEST_CASE("map endpoint") {
  Service s = make_service();
  const ServiceResponse r = s.get_map();
  CHECK(r.status == 200);
  const json j = body_of(r);
  CHECK(j["areas"].size() == 80);
  CHECK(j["layout"]["width"] == 100);
  CHECK(j["layout"]["height"] == 60);
  CHECK(j["centroids"].contains("124"));
  CHECK(j["adjacency"].size() == s.graph().edges().size());
}

TEST_CASE("ground endpoint") {
  Service s = make_service();
  SUBCASE("three step instruction") {
    const ServiceResponse r =
        s.post_ground(ground_body("go to the meeting room near the north exit").dump());
    REQUIRE(r.status == 200);
    const json j = body_of(r);
    CHECK(j["steps"].size() == 3);
    CHECK(j["ranked"][0]["id"] == "124");
    CHECK(j["plan"].front() == j["robot_area"]);
    CHECK(j["plan"].back() == "124");
    CHECK(j["steps"][2]["heatmap"] == "/belief/" + j["trace_id"].get<std::string>() + "/2");
    // Same instruction and start give the same trace id.
    const json again =
        body_of(s.post_ground(ground_body("go to the meeting room near the north exit").dump()));
    CHECK(again["trace_id"] == j["trace_id"]);
    json other = ground_body("go to the meeting room near the north exit");
    other["robot_area"] = "225";
    const json moved = body_of(s.post_ground(other.dump()));
    CHECK(moved["trace_id"] != j["trace_id"]);
    CHECK(moved["plan"].front() == "225");
  }
  SUBCASE("errors") {
    CHECK(s.post_ground("not json").status == 400);
    CHECK(s.post_ground("[1]").status == 400);
    CHECK(s.post_ground(R"({"instruction": 5})").status == 400);
    const ServiceResponse parse =
        s.post_ground(ground_body("go to the area between yosemite and hardware").dump());
    CHECK(parse.status == 400);
    CHECK(body_of(parse)["kind"] == "parse");
    json unknown = ground_body("go to room 124");
    unknown["robot_area"] = "9999";
    CHECK(s.post_ground(unknown.dump()).status == 404);
    const ServiceResponse degenerate =
        s.post_ground(ground_body("go to the kitchen to the south of exit 225").dump());
    CHECK(degenerate.status == 409);
    CHECK(body_of(degenerate)["kind"] == "degenerate");
    CHECK(body_of(degenerate)["step"].get<int>() >= 0);
  }
}

TEST_CASE("belief endpoint") {
  Service s = make_service();
  const json g = body_of(s.post_ground(ground_body("go to room 124").dump()));
  const std::string id = g["trace_id"];
  const ServiceResponse j = s.get_belief(id, "0", "");
  REQUIRE(j.status == 200);
  const json b = body_of(j);
  CHECK(b["cells"].size() == 6000);
  CHECK(b["type"] == "precise");
  double total = 0.0;
  for (double v : b["cells"]) total += v;
  CHECK(total == doctest::Approx(1.0));
  const ServiceResponse pgm = s.get_belief(id, "0", "pgm");
  CHECK(pgm.status == 200);
  CHECK(pgm.content_type == "image/x-portable-graymap");
  CHECK(pgm.body.rfind("P5\n100 60\n65535\n", 0) == 0);
  CHECK(s.get_belief(id, "1", "").status == 404);
  CHECK(s.get_belief(id, "x", "").status == 404);
  CHECK(s.get_belief("feedbeef", "0", "").status == 404);
  CHECK(s.get_belief(id, "0", "png").status == 400);
}

TEST_CASE("trace cache evicts least recently used") {
  ServiceOptions o;
  o.trace_cache = 2;
  Service s = make_service(o);
  auto id_of = [&](const std::string& instruction) {
    return body_of(s.post_ground(ground_body(instruction).dump()))["trace_id"].get<std::string>();
  };
  const std::string a = id_of("go to room 124");
  const std::string b = id_of("go to the area 305");
  CHECK(s.get_belief(a, "0", "").status == 200);  // a is now most recent
  const std::string c = id_of("go to the kitchen");
  CHECK(s.get_belief(b, "0", "").status == 404);
  CHECK(s.get_belief(a, "0", "").status == 200);
  CHECK(s.get_belief(c, "0", "").status == 200);
}

TEST_CASE("plan endpoint") {
  Service s = make_service();
  const ServiceResponse ok = s.post_plan(R"({"start": "225", "goal": "124"})");
  REQUIRE(ok.status == 200);
  const auto plan = body_of(ok)["plan"].get<std::vector<std::string>>();
  CHECK(check_plan(s.graph(), plan, "225", "124").empty());
  const auto bfs =
      body_of(s.post_plan(R"({"start": "225", "goal": "124", "strategy": "bfs"})"))["plan"];
  CHECK(bfs.size() <= plan.size());
  CHECK(s.post_plan(R"({"start": "225"})").status == 400);
  CHECK(s.post_plan(R"({"start": "225", "goal": "124", "strategy": "astar"})").status == 400);
  CHECK(s.post_plan(R"({"start": "225", "goal": "nowhere"})").status == 404);
}

TEST_CASE("plan endpoint reports unreachable goals") {
  const AreaMap map = make_map(rect(0, 0, 6, 2),
                               {{"1", "room", {}, {}, rect_points(0, 0, 2, 2)},
                                {"2", "room", {}, {}, rect_points(4, 0, 6, 2)}},
                               0.5);
  Service s(map, random_model(map, 1));
  CHECK(s.post_plan(R"({"start": "1", "goal": "2"})").status == 409);
}

TEST_CASE("robot follows a plan one area per tick") {
  ServiceOptions o;
  o.robot_start = "225";
  Service s = make_service(o);
  CHECK(body_of(s.get_robot())["area"] == "225");
  const auto plan = body_of(s.post_plan(R"({"start": "225", "goal": "124"})"))["plan"];
  CHECK(s.post_robot_move(json{{"plan", plan}}.dump()).status == 200);
  for (std::size_t i = 1; i < plan.size(); ++i) {
    const json r = body_of(s.get_robot());
    CHECK(r["area"] == plan[i]);
    CHECK(r["moving"] == (i + 1 < plan.size()));
  }
  CHECK(body_of(s.get_robot())["area"] == "124");
  // A plan must start where the robot is.
  CHECK(s.post_robot_move(R"({"plan": ["225", "224"]})").status == 400);
  CHECK(s.post_robot_move(R"({"plan": []})").status == 400);
  CHECK(s.post_robot_move(R"({"plan": ["124", "nowhere"]})").status == 404);
}

TEST_CASE("concurrent grounding") {
  Service s = make_service();
  const char* instructions[] = {"go to room 124", "go to the area 305",
                                "go to the meeting room near the north exit", "go to the kitchen"};
  std::vector<std::string> tops(8);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      const json j = body_of(s.post_ground(ground_body(instructions[i % 4]).dump()));
      tops[i] = j["ranked"][0]["id"];
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 0; i < 4; ++i) CHECK(tops[i] == tops[i + 4]);
  CHECK(tops[0] == "124");
  CHECK(tops[1] == "305");
}

TEST_CASE("http round trip") {
  Service s = make_service();
  HttpServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto map = client.Get("/map");
  for (int i = 0; i < 50 && !map; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    map = client.Get("/map");
  }
  REQUIRE(map);
  CHECK(map->status == 200);
  const auto g = client.Post("/ground", ground_body("go to room 124").dump(), "application/json");
  REQUIRE(g);
  CHECK(g->status == 200);
  const json body = json::parse(g->body);
  const auto b = client.Get(body["steps"][0]["heatmap"].get<std::string>() + "?format=pgm");
  REQUIRE(b);
  CHECK(b->status == 200);
  CHECK(b->get_header_value("Content-Type") == "image/x-portable-graymap");
  const auto bad = client.Post("/plan", "{}", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  server.stop();
  t.join();
}
