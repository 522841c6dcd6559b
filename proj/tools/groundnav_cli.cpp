// groundnav command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 input or parse error, 3 degenerate grounding.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "groundnav/datagen.hpp"
#include "groundnav/error.hpp"
#include "groundnav/grounder.hpp"
#include "groundnav/planner.hpp"
#include "groundnav/service.hpp"
#include "groundnav/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace groundnav;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Optional config document: {"lexicon": {...}, "hyperparameters": {...},
/// "train": {...}, "datagen": {...}}.
struct RunConfig {
  LexiconConfig lexicon;
  Hyperparameters hyper;
  TrainConfig train;
  DatagenConfig datagen;
};

RunConfig load_config(const std::string& path) {
  RunConfig c;
  if (path.empty()) return c;
  const json j = read_json_file(path);
  if (j.contains("lexicon")) c.lexicon = LexiconConfig::from_json(j["lexicon"]);
  if (j.contains("hyperparameters")) c.hyper = Hyperparameters::from_json(j["hyperparameters"]);
  if (j.contains("train")) c.train = TrainConfig::from_json(j["train"]);
  if (j.contains("datagen")) c.datagen = DatagenConfig::from_json(j["datagen"]);
  c.train.hyper = c.hyper;
  return c;
}

Dataset load_dataset(const std::string& path, const AreaMap& map, const Lexicon& lexicon) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path);
  return read_dataset(in, map, lexicon);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::vector<CompositeQuery> load_queries(const std::string& path) {
  return composite_from_json(read_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground destination descriptions on a segmented indoor map"};
  app.require_subcommand(1);

  std::string map_path = "data/office_map.json";
  std::string model_path, data_path, out_path, config_path, text, queries_path;
  std::string start, goal, heatmaps, overlay, host = "0.0.0.0", robot_start;
  int k = 10, port = default_port(), top = 5, epochs = 0, n = 100;
  std::uint64_t seed = 1;
  double lr = 0.0;
  bool rle = false, as_json = false, bfs = false, holdout_only = false;
  std::vector<int> steps{1, 3, 5};

  auto* gen = app.add_subcommand("gen-data", "Generate single-update training samples");
  gen->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  gen->add_option("--k", k, "Modifiers per type and key area")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output dataset (line-delimited JSON)")->required();
  gen->add_option("--config", config_path, "Config document")->check(CLI::ExistingFile);
  gen->add_flag("--rle", rle, "Inline run-length encoded grids");

  auto* tr = app.add_subcommand("train", "Train the update functions");
  tr->add_option("--data", data_path, "Dataset")->required()->check(CLI::ExistingFile);
  tr->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  tr->add_option("--config", config_path, "Config document")->check(CLI::ExistingFile);
  tr->add_option("--out", out_path, "Output model file")->required();
  tr->add_option("--epochs", epochs, "Override epochs")->check(CLI::PositiveNumber);
  tr->add_option("--lr", lr, "Override learning rate")->check(CLI::PositiveNumber);
  tr->add_option("--seed", seed, "Initialization and split seed");

  auto* ev = app.add_subcommand("eval", "Evaluate a model on a dataset");
  ev->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", data_path, "Dataset")->required()->check(CLI::ExistingFile);
  ev->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  ev->add_flag("--holdout-only", holdout_only, "Score only the training holdout split");
  ev->add_option("--seed", seed, "Split seed used in training");
  ev->add_flag("--json", as_json, "Print JSON");

  auto* gr = app.add_subcommand("ground", "Ground one instruction");
  gr->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  gr->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  gr->add_option("--text", text, "Instruction")->required();
  gr->add_option("--heatmaps", heatmaps, "Directory for per-step PGM heatmaps");
  gr->add_option("--top", top, "Ranked areas to print")->check(CLI::PositiveNumber);
  gr->add_flag("--json", as_json, "Print JSON");

  auto* gq = app.add_subcommand("gen-queries", "Generate synthetic composite queries");
  gq->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  gq->add_option("--n", n, "Queries per step count")->check(CLI::NonNegativeNumber);
  gq->add_option("--steps", steps, "Step counts (1, 3, 5)");
  gq->add_option("--seed", seed, "Random seed");
  gq->add_option("--out", out_path, "Output query file")->required();

  auto* be = app.add_subcommand("bench", "Composite grounding benchmark");
  be->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  be->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  be->add_option("--queries", queries_path, "Query file")->required()->check(CLI::ExistingFile);
  be->add_flag("--json", as_json, "Print JSON");

  auto* pl = app.add_subcommand("plan", "Plan an area path");
  pl->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  pl->add_option("--start", start, "Start area id")->required();
  pl->add_option("--goal", goal, "Goal area id")->required();
  pl->add_flag("--bfs", bfs, "Shortest path instead of depth-first");
  pl->add_option("--overlay", overlay, "Write a PGM overlay of the plan");

  auto* sv = app.add_subcommand("serve", "Run the HTTP service");
  sv->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  sv->add_option("--map", map_path, "Map document")->check(CLI::ExistingFile);
  sv->add_option("--port", port, "Port (default $GROUNDNAV_PORT or 8080)");
  sv->add_option("--host", host, "Bind address");
  sv->add_option("--robot-start", robot_start, "Initial robot area");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      RunConfig cfg = load_config(config_path);
      cfg.datagen.k = k;
      cfg.datagen.seed = seed;
      cfg.datagen.proximity_scale = cfg.hyper.proximity_scale;
      const AreaMap map = load_map_file(map_path);
      const Lexicon lexicon = Lexicon::build(map, cfg.lexicon, cfg.hyper.match_threshold,
                                             static_cast<std::size_t>(cfg.hyper.match_width));
      const Dataset ds = generate_dataset(map, lexicon, cfg.datagen);
      std::ofstream out(out_path);
      if (!out) throw Error("cannot write " + out_path);
      write_dataset(out, ds, rle ? GridEncoding::InlineRle : GridEncoding::Recipe);
      for (const auto& d : ds.diagnostics) std::cerr << "note: " << d << "\n";
      std::cout << "generated " << ds.samples.size() << " samples -> " << out_path << "\n";
      return 0;
    }

    if (*tr) {
      RunConfig cfg = load_config(config_path);
      if (epochs > 0) cfg.train.epochs = epochs;
      if (lr > 0.0) cfg.train.learning_rate = lr;
      if (tr->count("--seed")) cfg.train.seed = seed;
      const AreaMap map = load_map_file(map_path);
      ModelParams init = ModelParams::create(map, cfg.lexicon, cfg.hyper, cfg.train.seed);
      const Dataset ds = load_dataset(data_path, map, init.lexicon);
      const auto t0 = std::chrono::steady_clock::now();
      TrainResult result = train(ds, map, std::move(init), cfg.train, [](const EpochStats& s) {
        std::cout << "epoch " << s.epoch << "  mean loss " << std::fixed << std::setprecision(4)
                  << s.mean_loss << "\n";
      });
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.params.save(out_path);
      std::cout << "holdout (" << result.split.holdout.size() << " samples)\n"
                << result.holdout.table() << "trained in " << std::setprecision(1) << secs
                << " s -> " << out_path << "\n";
      return 0;
    }

    if (*ev) {
      const AreaMap map = load_map_file(map_path);
      const ModelParams params = ModelParams::load(model_path);
      const Dataset ds = load_dataset(data_path, map, params.lexicon);
      std::vector<TrainingSample> subset;
      if (holdout_only) {
        for (const std::size_t i : split_dataset(ds.samples.size(), 0.10, seed).holdout) {
          subset.push_back(ds.samples[i]);
        }
      } else {
        subset = ds.samples;
      }
      TrainConfig tc;
      tc.hyper = params.hyper;
      const EvalReport report = evaluate(params, subset, map, tc);
      if (as_json) {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        std::cout << report.table();
      }
      return 0;
    }

    if (*gr) {
      const AreaMap map = load_map_file(map_path);
      const ModelParams params = ModelParams::load(model_path);
      const BeliefTrace trace = ground(text, map, params);
      if (!heatmaps.empty()) {
        fs::create_directories(heatmaps);
        for (std::size_t i = 0; i < trace.steps.size(); ++i) {
          write_file(fs::path(heatmaps) / ("step_" + std::to_string(i) + ".pgm"),
                     to_pgm(trace.steps[i].posterior));
        }
      }
      if (as_json) {
        std::cout << trace_to_json(trace, map, static_cast<std::size_t>(top)).dump(2) << "\n";
        return 0;
      }
      std::cout << "destination: " << trace.destination << "\n";
      for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        std::cout << "  step " << i + 1 << "  " << std::left << std::setw(12)
                  << to_string(s.type) << " \"" << s.modifier.raw << "\"\n";
        for (const auto& d : s.diagnostics) std::cout << "      note: " << d << "\n";
      }
      std::cout << "ranked areas:\n";
      for (std::size_t i = 0; i < trace.ranked.size() && i < static_cast<std::size_t>(top); ++i) {
        const Area& a = map.area(trace.ranked[i].index);
        std::cout << "  " << i + 1 << ". " << std::setw(6) << a.id << std::fixed
                  << std::setprecision(4) << trace.ranked[i].weight << "  " << a.category
                  << (a.subcategory ? " / " + *a.subcategory : "")
                  << (a.name ? " (" + *a.name + ")" : "") << "\n";
      }
      return 0;
    }

    if (*gq) {
      const AreaMap map = load_map_file(map_path);
      std::vector<CompositeQuery> all;
      for (const int s : steps) {
        auto qs = gen_composite(map, seed + static_cast<std::uint64_t>(s), n, s);
        all.insert(all.end(), qs.begin(), qs.end());
      }
      write_file(out_path, composite_to_json(all).dump(2));
      std::cout << "generated " << all.size() << " queries -> " << out_path << "\n";
      return 0;
    }

    if (*be) {
      const AreaMap map = load_map_file(map_path);
      const ModelParams params = ModelParams::load(model_path);
      const CompositeReport report = benchmark_composite(load_queries(queries_path), map, params);
      if (as_json) {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        std::cout << report.table();
      }
      return 0;
    }

    if (*pl) {
      const AreaMap map = load_map_file(map_path);
      const AreaGraph graph = build_adjacency(map);
      const auto plan = plan_path(graph, start, goal,
                                  bfs ? PlanStrategy::BreadthFirst : PlanStrategy::DepthFirst);
      if (!overlay.empty()) write_file(overlay, plan_overlay_pgm(map, plan));
      std::cout << plan_to_json(plan).dump() << "\n";
      return 0;
    }

    if (*sv) {
      ServiceOptions opts;
      if (!robot_start.empty()) opts.robot_start = robot_start;
      Service service(load_map_file(map_path), ModelParams::load(model_path), opts);
      std::cerr << "serving on " << host << ":" << port << "\n";
      run_server(service, host, port);
      return 0;
    }
  } catch (const DegenerateUpdate& e) {
    std::cerr << "degenerate grounding";
    if (e.step() >= 0) std::cerr << " at step " << e.step() + 1;
    std::cerr << ": " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
