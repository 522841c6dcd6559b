#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/belief.hpp"
#include "groundnav/lexicon.hpp"
#include "groundnav/map.hpp"
#include "groundnav/model.hpp"
#include "groundnav/parser.hpp"

namespace groundnav {

struct DatagenConfig {
  int k = 10;  // modifiers per (type, key area)
  std::uint64_t seed = 1;
  int prior_samples = 256;  // locations drawn from a precise sample's prior
  double proximity_scale = 1.0;
  /// Chance of including each bracketed part of a precise template.
  double optional_probability = 0.5;
  /// Chance of a leading "the" on head phrases.
  double article_probability = 0.5;
  /// Chance that a precise modifier names a¹ by id or name instead.
  double identifier_probability = 0.25;
  int max_retries = 16;

  nlohmann::json to_json() const;
  static DatagenConfig from_json(const nlohmann::json& j);
};

/// Reproducible description of a synthetic belief grid.
struct GridRecipe {
  enum class Kind { Uniform, Gaussian, Masked };
  Kind kind = Kind::Uniform;
  std::string area;  // Uniform: the area; otherwise the area the grid is built around
  Point center;
  double variance = 0.0;
  double alpha = 0.0;  // Masked only

  BeliefGrid build(const AreaMap& map) const;
  nlohmann::json to_json() const;
  static GridRecipe from_json(const nlohmann::json& j);
};

/// One single-update example. Which optionals are set depends on the type:
/// dummy carries only the modifier; proximity adds both grids; directional
/// adds alpha; precise adds kappa, target, competitor and alpha when a
/// direction word was used.
struct TrainingSample {
  std::size_t id = 0;
  UpdateType type = UpdateType::Dummy;
  Modifier modifier;
  std::optional<std::string> key_area;
  std::optional<GridRecipe> prior_recipe;
  std::optional<GridRecipe> posterior_recipe;
  std::shared_ptr<const BeliefGrid> prior;
  std::shared_ptr<const BeliefGrid> posterior;
  std::optional<double> alpha;
  std::optional<int> kappa;
  std::optional<std::string> target;      // a¹
  std::optional<std::string> competitor;  // a²
  std::string rule;                       // template that produced a precise modifier
};

struct Dataset {
  std::vector<TrainingSample> samples;
  std::vector<std::string> diagnostics;
};

/// Precise modifier text with its labels.
struct PreciseModifier {
  std::string text;
  int kappa = 0;
  std::optional<double> alpha;
  std::string rule;  // "category", "subcategory", "direction", "id", "name"
};

/// Minimal phrase that picks a¹ over a², bracketed parts optional:
/// different category -> [sub] category; different sub-category ->
/// [direction] [sub] category; otherwise direction [sub] category. The
/// direction is the compass of a¹'s centroid seen from a²'s.
PreciseModifier modifier_from_rules(const Area& a1, const Area& a2,
                                    const DatagenConfig& config, std::mt19937_64& rng);

TrainingSample gen_dummy(const Lexicon& lexicon, const DatagenConfig& config,
                         std::mt19937_64& rng);
TrainingSample gen_proximity(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                             const DatagenConfig& config, std::mt19937_64& rng);
TrainingSample gen_directional(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                               const DatagenConfig& config, std::mt19937_64& rng);
/// Falls back to the nearest other area as a² (with a diagnostic) when the
/// prior keeps hitting fewer than two areas.
TrainingSample gen_precise(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                           const DatagenConfig& config, std::mt19937_64& rng,
                           std::vector<std::string>* diagnostics = nullptr);

/// 4 * areas * k samples, ordered by type, then key area, then draw.
/// Deterministic in (map, lexicon, config).
Dataset generate_dataset(const AreaMap& map, const Lexicon& lexicon,
                         const DatagenConfig& config);

/// Materializes grids for samples read back from disk.
void attach_grids(Dataset& dataset, const AreaMap& map);

enum class GridEncoding { Recipe, InlineRle };

/// One JSON object per line. Recipe encoding stores how to rebuild each
/// grid; InlineRle adds the cells run-length encoded as [value, count]
/// pairs.
void write_dataset(std::ostream& out, const Dataset& dataset,
                   GridEncoding encoding = GridEncoding::Recipe);
Dataset read_dataset(std::istream& in, const AreaMap& map, const Lexicon& lexicon);

nlohmann::json sample_to_json(const TrainingSample& sample,
                              GridEncoding encoding = GridEncoding::Recipe);

/// Full instruction with its oracle-verified goal area.
struct CompositeQuery {
  std::string instruction;
  std::string goal;
  int steps = 1;
  std::string landmark;  // empty for single-step queries
};

/// Synthetic multi-step queries of the forms "go to {X}",
/// "go to {X} near {Y}" and "go to {X} to the {D} of {Y}" (1, 3, 5 chain
/// steps). Landmarks Y are named uniquely; X names a class and the goal is
/// the nearest class member (inside the half-plane for directions) with a
/// clear distance margin over the rest.
/// Throws Error when the map cannot satisfy the template.
std::vector<CompositeQuery> gen_composite(const AreaMap& map, std::uint64_t seed, int n,
                                          int steps);

nlohmann::json composite_to_json(const std::vector<CompositeQuery>& queries);
std::vector<CompositeQuery> composite_from_json(const nlohmann::json& j);

}  // namespace groundnav
