#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "groundnav/grounder.hpp"
#include "groundnav/map.hpp"
#include "groundnav/model.hpp"
#include "groundnav/planner.hpp"

namespace httplib {
class Server;
}

namespace groundnav {

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceOptions {
  std::size_t trace_cache = 128;
  /// Simulated robot's initial area; defaults to the lowest area id.
  std::optional<std::string> robot_start;
  PlanStrategy strategy = PlanStrategy::DepthFirst;
};

/// Request handlers behind the HTTP API. Map and model are shared
/// read-only; the trace cache and robot state sit behind one mutex.
///
///   GET  /map                      map document, grid layout, adjacency
///   POST /ground  {instruction, robot_area?}
///   GET  /belief/{trace}/{step}    ?format=json (default) | pgm
///   POST /plan    {start, goal, strategy?}
///   POST /robot/move {plan}
///   GET  /robot                    advances one area per call while moving
///
/// Errors: 400 malformed request or instruction, 404 unknown area, trace
/// or step, 409 degenerate grounding or unreachable goal.
class Service {
 public:
  Service(AreaMap map, ModelParams params, ServiceOptions options = {});

  ServiceResponse get_map() const;
  ServiceResponse post_ground(const std::string& body);
  ServiceResponse get_belief(const std::string& trace_id, const std::string& step,
                             const std::string& format);
  ServiceResponse post_plan(const std::string& body) const;
  ServiceResponse post_robot_move(const std::string& body);
  ServiceResponse get_robot();

  const AreaMap& map() const { return map_; }
  const ModelParams& params() const { return params_; }
  const AreaGraph& graph() const { return graph_; }

 private:
  struct CachedTrace {
    std::string id;
    std::shared_ptr<const BeliefTrace> trace;
  };

  std::shared_ptr<const BeliefTrace> lookup(const std::string& id);
  void remember(const std::string& id, std::shared_ptr<const BeliefTrace> trace);

  AreaMap map_;
  ModelParams params_;
  AreaGraph graph_;
  ServiceOptions options_;

  std::mutex mutex_;
  std::list<CachedTrace> lru_;  // most recent first
  std::unordered_map<std::string, std::list<CachedTrace>::iterator> index_;
  std::string robot_area_;
  std::vector<std::string> route_;  // remaining areas, next first
};

/// Port from GROUNDNAV_PORT, else 8080.
int default_port();

/// HTTP front end for a Service. `bind` then `listen` blocks until `stop`
/// is called from another thread.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

/// Serves the API until the process is stopped. Throws Error if the port
/// cannot be bound.
void run_server(Service& service, const std::string& host, int port);

}  // namespace groundnav
