#include "groundnav/service.hpp"

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "groundnav/belief.hpp"
#include "groundnav/error.hpp"

namespace groundnav {

using nlohmann::json;

namespace {

ServiceResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

ServiceResponse error_response(int status, const std::string& kind, const std::string& message,
                               json extra = json::object()) {
  extra["error"] = message;
  extra["kind"] = kind;
  return json_response(status, extra);
}

std::string trace_id_for(const std::string& instruction, const std::string& robot_area) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0')
    << std::hash<std::string>{}(instruction + '\x1f' + robot_area);
  return s.str();
}

std::optional<json> parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) return std::nullopt;
    return j;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Service::Service(AreaMap map, ModelParams params, ServiceOptions options)
    : map_(std::move(map)),
      params_(std::move(params)),
      graph_(build_adjacency(map_)),
      options_(std::move(options)) {
  if (options_.trace_cache == 0) options_.trace_cache = 1;
  robot_area_ = options_.robot_start.value_or(map_.area(map_.id_order().front()).id);
  map_.index_of(robot_area_);
}

ServiceResponse Service::get_map() const {
  json doc = map_.to_json();
  const GridGeometry& g = map_.grid();
  doc["layout"] = {{"width", g.width},
                   {"height", g.height},
                   {"resolution", g.resolution},
                   {"origin", {g.origin.x, g.origin.y}},
                   {"row_order", "south_to_north"}};
  json centroids = json::object();
  for (const Area& a : map_.areas()) centroids[a.id] = {a.centroid.x, a.centroid.y};
  doc["centroids"] = std::move(centroids);
  doc["adjacency"] = graph_.to_json()["edges"];
  return json_response(200, doc);
}

ServiceResponse Service::post_ground(const std::string& body) {
  const auto req = parse_body(body);
  if (!req || !req->contains("instruction") || !(*req)["instruction"].is_string()) {
    return error_response(400, "bad_request", "expected {\"instruction\": string}");
  }
  const std::string instruction = (*req)["instruction"].get<std::string>();
  std::string start;
  if (req->contains("robot_area") && !(*req)["robot_area"].is_null()) {
    if (!(*req)["robot_area"].is_string()) {
      return error_response(400, "bad_request", "robot_area must be a string");
    }
    start = (*req)["robot_area"].get<std::string>();
    if (!map_.find(start)) return error_response(404, "unknown_area", UnknownArea(start).what());
  } else {
    std::lock_guard lock(mutex_);
    start = robot_area_;
  }

  const std::string id = trace_id_for(instruction, start);
  std::shared_ptr<const BeliefTrace> trace = lookup(id);
  if (!trace) {
    try {
      trace = std::make_shared<const BeliefTrace>(ground(instruction, map_, params_));
    } catch (const ParseError& e) {
      return error_response(400, "parse", e.what());
    } catch (const UnknownArea& e) {
      return error_response(404, "unknown_area", e.what());
    } catch (const DegenerateUpdate& e) {
      return error_response(409, "degenerate", e.what(), {{"step", e.step()}});
    }
    remember(id, trace);
  }

  json out = trace_to_json(*trace, map_, 10);
  out["trace_id"] = id;
  out["robot_area"] = start;
  for (auto& step : out["steps"]) {
    step["heatmap"] = "/belief/" + id + "/" + std::to_string(step["index"].get<std::size_t>());
  }
  json diagnostics = json::array();
  if (trace->gather_degenerate) diagnostics.push_back("final belief holds no area mass");
  try {
    out["plan"] = plan_path(graph_, start, trace->ranked.front().id, options_.strategy);
  } catch (const Unreachable& e) {
    out["plan"] = nullptr;
    diagnostics.push_back(e.what());
  }
  out["diagnostics"] = std::move(diagnostics);
  return json_response(200, out);
}

ServiceResponse Service::get_belief(const std::string& trace_id, const std::string& step,
                                    const std::string& format) {
  const auto trace = lookup(trace_id);
  if (!trace) return error_response(404, "unknown_trace", "unknown trace '" + trace_id + "'");
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(step, &used);
    if (used != step.size()) throw std::invalid_argument(step);
  } catch (const std::exception&) {
    return error_response(404, "unknown_step", "step must be an index");
  }
  if (k >= trace->steps.size()) {
    return error_response(404, "unknown_step", "trace has " + std::to_string(trace->steps.size()) +
                                                   " steps");
  }
  const BeliefGrid& grid = trace->steps[k].posterior;
  if (format == "pgm") return {200, "image/x-portable-graymap", to_pgm(grid)};
  if (!format.empty() && format != "json") {
    return error_response(400, "bad_request", "format must be json or pgm");
  }
  json out = to_json(grid);
  out["step"] = k;
  out["type"] = std::string(to_string(trace->steps[k].type));
  out["modifier"] = trace->steps[k].modifier.raw;
  return json_response(200, out);
}

ServiceResponse Service::post_plan(const std::string& body) const {
  const auto req = parse_body(body);
  if (!req || !req->contains("start") || !req->contains("goal") ||
      !(*req)["start"].is_string() || !(*req)["goal"].is_string()) {
    return error_response(400, "bad_request", "expected {\"start\": id, \"goal\": id}");
  }
  PlanStrategy strategy = options_.strategy;
  const std::string s = req->value("strategy", std::string());
  if (s == "bfs") {
    strategy = PlanStrategy::BreadthFirst;
  } else if (s == "dfs") {
    strategy = PlanStrategy::DepthFirst;
  } else if (!s.empty()) {
    return error_response(400, "bad_request", "strategy must be dfs or bfs");
  }
  try {
    const auto plan = plan_path(graph_, (*req)["start"].get<std::string>(),
                                (*req)["goal"].get<std::string>(), strategy);
    return json_response(200, {{"plan", plan}});
  } catch (const UnknownArea& e) {
    return error_response(404, "unknown_area", e.what());
  } catch (const Unreachable& e) {
    return error_response(409, "unreachable", e.what());
  }
}

ServiceResponse Service::post_robot_move(const std::string& body) {
  const auto req = parse_body(body);
  if (!req || !req->contains("plan") || !(*req)["plan"].is_array()) {
    return error_response(400, "bad_request", "expected {\"plan\": [area ids]}");
  }
  std::vector<std::string> plan;
  for (const auto& v : (*req)["plan"]) {
    if (!v.is_string()) return error_response(400, "bad_request", "plan entries must be strings");
    plan.push_back(v.get<std::string>());
  }
  if (plan.empty()) return error_response(400, "bad_request", "plan is empty");
  for (const auto& id : plan) {
    if (!map_.find(id)) return error_response(404, "unknown_area", UnknownArea(id).what());
  }
  std::lock_guard lock(mutex_);
  const std::string problem = check_plan(graph_, plan, robot_area_, plan.back());
  if (!problem.empty()) {
    return error_response(400, "bad_plan", problem, {{"robot_area", robot_area_}});
  }
  route_.assign(plan.begin() + 1, plan.end());
  return json_response(200, {{"area", robot_area_}, {"route", route_}, {"moving", !route_.empty()}});
}

ServiceResponse Service::get_robot() {
  std::lock_guard lock(mutex_);
  if (!route_.empty()) {
    robot_area_ = route_.front();
    route_.erase(route_.begin());
  }
  return json_response(200, {{"area", robot_area_}, {"route", route_}, {"moving", !route_.empty()}});
}

std::shared_ptr<const BeliefTrace> Service::lookup(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->trace;
}

void Service::remember(const std::string& id, std::shared_ptr<const BeliefTrace> trace) {
  std::lock_guard lock(mutex_);
  if (const auto it = index_.find(id); it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  lru_.push_front({id, std::move(trace)});
  index_[id] = lru_.begin();
  while (lru_.size() > options_.trace_cache) {
    index_.erase(lru_.back().id);
    lru_.pop_back();
  }
}

int default_port() {
  if (const char* env = std::getenv("GROUNDNAV_PORT")) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return 8080;
}

HttpServer::HttpServer(Service& service) : server_(std::make_unique<httplib::Server>()) {
  httplib::Server& server = *server_;
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/map", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.get_map());
  });
  server.Post("/ground", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.post_ground(req.body));
  });
  server.Get(R"(/belief/([^/]+)/([^/]+))", [&service, send](const httplib::Request& req,
                                                             httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "";
    send(res, service.get_belief(req.matches[1], req.matches[2], format));
  });
  server.Post("/plan", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.post_plan(req.body));
  });
  server.Post("/robot/move", [&service, send](const httplib::Request& req,
                                              httplib::Response& res) {
    send(res, service.post_robot_move(req.body));
  });
  server.Get("/robot", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.get_robot());
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (server_->bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

void run_server(Service& service, const std::string& host, int port) {
  HttpServer server(service);
  server.bind(host, port);
  server.listen();
}

}  // namespace groundnav
