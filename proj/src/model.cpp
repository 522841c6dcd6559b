#include "groundnav/model.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"

namespace groundnav {

using nlohmann::json;

std::string_view to_string(UpdateType type) {
  switch (type) {
    case UpdateType::Dummy: return "dummy";
    case UpdateType::Proximity: return "proximity";
    case UpdateType::Directional: return "directional";
    case UpdateType::Precise: return "precise";
  }
  return "unknown";
}

UpdateType update_type_from_string(std::string_view name) {
  for (int t = 0; t < kUpdateTypeCount; ++t) {
    if (to_string(static_cast<UpdateType>(t)) == name) return static_cast<UpdateType>(t);
  }
  throw std::invalid_argument("unknown update type '" + std::string(name) + "'");
}

json Hyperparameters::to_json() const {
  return json{{"match_threshold", match_threshold},
              {"proximity_scale", proximity_scale},
              {"gamma_floor", gamma_floor},
              {"embedding_width", embedding_width},
              {"hidden_width", hidden_width},
              {"match_width", match_width}};
}

Hyperparameters Hyperparameters::from_json(const json& j) {
  Hyperparameters h;
  h.match_threshold = j.value("match_threshold", h.match_threshold);
  h.proximity_scale = j.value("proximity_scale", h.proximity_scale);
  h.gamma_floor = j.value("gamma_floor", h.gamma_floor);
  h.embedding_width = j.value("embedding_width", h.embedding_width);
  h.hidden_width = j.value("hidden_width", h.hidden_width);
  h.match_width = j.value("match_width", h.match_width);
  if (!(h.match_threshold > 0.0 && h.match_threshold < 1.0)) {
    throw std::invalid_argument("match_threshold must lie in (0, 1)");
  }
  if (!(h.proximity_scale > 0.0)) throw std::invalid_argument("proximity_scale must be positive");
  if (!(h.gamma_floor > 0.0)) throw std::invalid_argument("gamma_floor must be positive");
  if (h.embedding_width < 1 || h.hidden_width < 1 || h.match_width < 1) {
    throw std::invalid_argument("layer widths must be positive");
  }
  return h;
}

ModelParams::ModelParams(Lexicon lex, Hyperparameters h)
    : lexicon(std::move(lex)),
      hyper(h),
      embeddings("embeddings",
                 nnet::Matrix::Zero(static_cast<nnet::Index>(lexicon.size()),
                                    h.embedding_width)),
      type_encoder("type_encoder", h.embedding_width, h.hidden_width),
      direction_encoder("direction_encoder", h.embedding_width, h.hidden_width),
      shape_encoder("shape_encoder", h.embedding_width, h.hidden_width),
      type_head("type_head", h.hidden_width, kUpdateTypeCount),
      direction_head("direction_head", h.hidden_width, 1),
      kappa_head("kappa_head", h.hidden_width, 1),
      beta_head("beta_head", h.hidden_width, 1) {}

ModelParams ModelParams::create(const AreaMap& map, const LexiconConfig& config,
                                const Hyperparameters& hyper, std::uint64_t seed) {
  ModelParams m(Lexicon::build(map, config, hyper.match_threshold,
                               static_cast<std::size_t>(hyper.match_width), seed),
                hyper);
  m.initialize(seed);
  return m;
}

void ModelParams::initialize(std::uint64_t init_seed) {
  seed = init_seed;
  // Offset so the weights do not replay the lexicon's random stream.
  std::mt19937_64 rng(init_seed ^ 0x9E3779B97F4A7C15ULL);
  embeddings.value = nnet::xavier_uniform(embeddings.value.rows(),
                                          embeddings.value.cols(), rng);
  embeddings.zero_grad();
  type_encoder.initialize(rng);
  direction_encoder.initialize(rng);
  shape_encoder.initialize(rng);
  type_head.initialize(rng);
  direction_head.initialize(rng);
  kappa_head.initialize(rng);
  beta_head.initialize(rng);
}

std::vector<nnet::Parameter*> ModelParams::parameters() {
  std::vector<nnet::Parameter*> out{&embeddings};
  for (auto* enc : {&type_encoder, &direction_encoder, &shape_encoder}) {
    for (auto* p : enc->parameters()) out.push_back(p);
  }
  for (auto* head : {&type_head, &direction_head, &kappa_head, &beta_head}) {
    for (auto* p : head->parameters()) out.push_back(p);
  }
  return out;
}

std::vector<const nnet::Parameter*> ModelParams::parameters() const {
  auto mutable_params = const_cast<ModelParams*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

json ModelParams::to_json() const {
  json weights = json::object();
  const auto params = parameters();
  nnet::write_parameters(weights, params);
  return json{{"format", "groundnav-model"},
              {"version", 1},
              {"seed", seed},
              {"config_fingerprint", config_fingerprint},
              {"hyperparameters", hyper.to_json()},
              {"lexicon", lexicon.to_json()},
              {"weights", std::move(weights)}};
}

ModelParams ModelParams::from_json(const json& j) {
  if (j.value("format", std::string()) != "groundnav-model") {
    throw std::invalid_argument("not a groundnav model document");
  }
  ModelParams m(Lexicon::from_json(j.at("lexicon")),
                Hyperparameters::from_json(j.at("hyperparameters")));
  m.seed = j.value("seed", std::uint64_t{0});
  m.config_fingerprint = j.value("config_fingerprint", std::string());
  const auto params = m.parameters();
  nnet::read_parameters(j.at("weights"), params);
  return m;
}

void ModelParams::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path.string());
  out << to_json().dump();
}

ModelParams ModelParams::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(json::parse(ss.str()));
  } catch (const json::exception& e) {
    throw Error("malformed model file " + path.string() + ": " + e.what());
  }
}

}  // namespace groundnav
