#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/lexicon.hpp"
#include "groundnav/nnet/layers.hpp"

namespace groundnav {

/// How a modifier transforms its prior. Values are the training labels.
enum class UpdateType : int { Dummy = 0, Proximity = 1, Directional = 2, Precise = 3 };

inline constexpr int kUpdateTypeCount = 4;

std::string_view to_string(UpdateType type);
/// Accepts the lowercase names; throws std::invalid_argument otherwise.
UpdateType update_type_from_string(std::string_view name);

struct Hyperparameters {
  double match_threshold = 0.5;  // lambda: match dot-product cutoff
  double proximity_scale = 1.0;  // rho: Gaussian variance per unit area
  double gamma_floor = 1e-3;     // epsilon: floor of the directional factor
  int embedding_width = 32;
  int hidden_width = 8;
  int match_width = 128;

  nlohmann::json to_json() const;
  static Hyperparameters from_json(const nlohmann::json& j);
};

/// Everything needed to ground an instruction: lexicon, trainable
/// embeddings, the three recurrent encoders with their heads, and the
/// update hyperparameters.
///
/// Encoders: `type` feeds the 4-way classifier head, `direction` the angle
/// head, `shape` both the direction-indicator head and the shaping head.
struct ModelParams {
  Lexicon lexicon;
  Hyperparameters hyper;
  std::uint64_t seed = 0;
  std::string config_fingerprint;

  nnet::Parameter embeddings;  // vocabulary x embedding_width
  nnet::GruEncoder type_encoder;
  nnet::GruEncoder direction_encoder;
  nnet::GruEncoder shape_encoder;
  nnet::LinearHead type_head;       // 4 outputs
  nnet::LinearHead direction_head;  // 1 output
  nnet::LinearHead kappa_head;      // 1 output
  nnet::LinearHead beta_head;       // 1 output

  /// Zero weights everywhere. Every head then outputs 0.
  ModelParams(Lexicon lexicon, Hyperparameters hyper);

  /// Builds the lexicon from the map and draws initial weights from `seed`.
  static ModelParams create(const AreaMap& map, const LexiconConfig& config,
                            const Hyperparameters& hyper, std::uint64_t seed);

  void initialize(std::uint64_t seed);

  std::vector<nnet::Parameter*> parameters();
  std::vector<const nnet::Parameter*> parameters() const;

  nlohmann::json to_json() const;
  static ModelParams from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static ModelParams load(const std::filesystem::path& path);
};

}  // namespace groundnav
