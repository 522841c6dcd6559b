#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "groundnav/datagen.hpp"
#include "groundnav/error.hpp"
#include "groundnav/grounder.hpp"
#include "groundnav/planner.hpp"
#include "groundnav/trainer.hpp"

namespace py = pybind11;
using namespace groundnav;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
std::string dump(const json& j) { return j.dump(); }

TrainConfig train_config_from(const std::string& text) {
  return text.empty() ? TrainConfig{} : TrainConfig::from_json(json::parse(text));
}

std::vector<TrainingSample> subset(const Dataset& ds, const std::vector<std::size_t>& idx) {
  std::vector<TrainingSample> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) out.push_back(ds.samples.at(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_groundnav, m) {
  m.doc() = "Destination grounding on segmented indoor maps";

  static py::exception<Error> error(m, "GroundnavError");
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<DegenerateUpdate> degenerate(m, "DegenerateUpdate", error.ptr());
  static py::exception<UnknownArea> unknown_area(m, "UnknownArea", error.ptr());
  static py::exception<Unreachable> unreachable(m, "Unreachable", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const DegenerateUpdate& e) {
      degenerate(e.what());
    } catch (const UnknownArea& e) {
      unknown_area(e.what());
    } catch (const Unreachable& e) {
      unreachable(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<AreaMap>(m, "AreaMap")
      .def_property_readonly("size", &AreaMap::size)
      .def_property_readonly("resolution", &AreaMap::resolution)
      .def_property_readonly("grid_shape",
                             [](const AreaMap& map) {
                               return std::make_pair(map.grid().height, map.grid().width);
                             })
      .def("ids",
           [](const AreaMap& map) {
             std::vector<std::string> ids;
             for (const std::size_t i : map.id_order()) ids.push_back(map.area(i).id);
             return ids;
           })
      .def("to_json", [](const AreaMap& map) { return dump(map.to_json()); });

  m.def("load_map", [](const std::string& text) { return load_map(std::string_view(text)); },
        py::arg("document"));
  m.def("load_map_file", [](const std::string& path) { return load_map_file(path); },
        py::arg("path"));

  py::class_<ModelParams>(m, "Model")
      .def_static(
          "create",
          [](const AreaMap& map, std::uint64_t seed) {
            return ModelParams::create(map, LexiconConfig{}, Hyperparameters{}, seed);
          },
          py::arg("map"), py::arg("seed") = 1)
      .def_static("load", [](const std::string& path) { return ModelParams::load(path); })
      .def("save", [](const ModelParams& p, const std::string& path) { p.save(path); })
      .def_readonly("seed", &ModelParams::seed)
      .def("vocabulary", [](const ModelParams& p) { return p.lexicon.vocabulary(); })
      .def("classify",
           [](const ModelParams& p, const std::string& text) {
             return std::string(to_string(classify_modifier(make_modifier(p.lexicon, text), p)));
           })
      .def("type_probabilities",
           [](const ModelParams& p, const std::string& text) {
             const auto probs = type_probabilities(make_modifier(p.lexicon, text), p);
             return std::vector<double>(probs.begin(), probs.end());
           })
      .def("direction",
           [](const ModelParams& p, const std::string& text) {
             return predict_direction(make_modifier(p.lexicon, text), p);
           })
      .def("kappa_beta", [](const ModelParams& p, const std::string& text) {
        const KappaBeta kb = predict_kappa_beta(make_modifier(p.lexicon, text), p);
        return std::make_pair(kb.kappa, kb.beta);
      });

  m.def("extract_destination", [](const std::string& text) {
    return extract_destination(text, LexiconConfig{});
  });
  m.def("parse_chain", [](const ModelParams& p, const std::string& phrase) {
    std::vector<std::string> out;
    for (const Modifier& u : parse_modifier_chain(phrase, p.lexicon)) out.push_back(u.raw);
    return out;
  });

  m.def(
      "ground_json",
      [](const AreaMap& map, const ModelParams& p, const std::string& instruction,
         std::size_t ranked) {
        py::gil_scoped_release release;
        return dump(trace_to_json(ground(instruction, map, p), map, ranked));
      },
      py::arg("map"), py::arg("model"), py::arg("instruction"), py::arg("ranked") = 10);

  m.def("dummy_prior", [](const AreaMap& map) {
    const BeliefGrid b = dummy_prior(map);
    return std::vector<double>(b.cells().begin(), b.cells().end());
  });
  m.def("uniform_over_area", [](const AreaMap& map, const std::string& id) {
    const BeliefGrid b = uniform_over_area(map, id);
    return std::vector<double>(b.cells().begin(), b.cells().end());
  });
  m.def("gather_area_weights", [](const AreaMap& map, const std::vector<double>& cells) {
    return gather_area_weights(cells, map).weights;
  });
  m.def("gamma_factor", &gamma_factor, py::arg("map"), py::arg("alpha"), py::arg("kappa"),
        py::arg("beta"), py::arg("epsilon") = 1e-3);

  py::class_<Dataset>(m, "Dataset")
      .def("__len__", [](const Dataset& d) { return d.samples.size(); })
      .def("diagnostics", [](const Dataset& d) { return d.diagnostics; })
      .def("to_jsonl", [](const Dataset& d) {
        std::ostringstream out;
        write_dataset(out, d);
        return out.str();
      });

  m.def(
      "generate_dataset",
      [](const AreaMap& map, const ModelParams& p, int k, std::uint64_t seed) {
        DatagenConfig c;
        c.k = k;
        c.seed = seed;
        c.proximity_scale = p.hyper.proximity_scale;
        return generate_dataset(map, p.lexicon, c);
      },
      py::arg("map"), py::arg("model"), py::arg("k") = 10, py::arg("seed") = 1);
  m.def("read_dataset", [](const std::string& text, const AreaMap& map, const ModelParams& p) {
    std::istringstream in(text);
    return read_dataset(in, map, p.lexicon);
  });

  m.def(
      "train_json",
      [](const Dataset& ds, const AreaMap& map, const ModelParams& init,
         const std::string& config) {
        const TrainConfig c = train_config_from(config);
        py::gil_scoped_release release;
        TrainResult r = train(ds, map, init, c);
        json history = json::array();
        for (const auto& h : r.history) history.push_back({{"epoch", h.epoch}, {"loss", h.mean_loss}});
        return std::make_pair(std::move(r.params),
                              dump({{"holdout", r.holdout.to_json()}, {"history", history}}));
      },
      py::arg("dataset"), py::arg("map"), py::arg("model"), py::arg("config") = "");
  m.def(
      "evaluate_json",
      [](const ModelParams& p, const Dataset& ds, const AreaMap& map, bool holdout_only,
         std::uint64_t seed) {
        std::vector<TrainingSample> samples =
            holdout_only ? subset(ds, split_dataset(ds.samples.size(), 0.10, seed).holdout)
                         : ds.samples;
        return dump(evaluate(p, samples, map).to_json());
      },
      py::arg("model"), py::arg("dataset"), py::arg("map"), py::arg("holdout_only") = false,
      py::arg("seed") = 1);

  m.def("gen_composite_json", [](const AreaMap& map, std::uint64_t seed, int n, int steps) {
    return dump(composite_to_json(gen_composite(map, seed, n, steps)));
  });
  m.def("benchmark_json",
        [](const std::string& queries, const AreaMap& map, const ModelParams& p) {
          return dump(benchmark_composite(composite_from_json(json::parse(queries)), map, p)
                          .to_json());
        });

  m.def("adjacency", [](const AreaMap& map) {
    const AreaGraph g = build_adjacency(map);
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [a, b] : g.edges()) out.emplace_back(g.ids()[a], g.ids()[b]);
    return out;
  });
  m.def(
      "plan",
      [](const AreaMap& map, const std::string& start, const std::string& goal, bool bfs) {
        return plan_path(build_adjacency(map), start, goal,
                         bfs ? PlanStrategy::BreadthFirst : PlanStrategy::DepthFirst);
      },
      py::arg("map"), py::arg("start"), py::arg("goal"), py::arg("bfs") = false);
}
