#include "groundnav/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "groundnav/compass.hpp"
#include "groundnav/error.hpp"
#include "groundnav/grounder.hpp"
#include "groundnav/text.hpp"

namespace groundnav {

using nlohmann::json;

namespace {

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
  return items[dist(rng)];
}

std::string with_article(const std::string& phrase, const DatagenConfig& config,
                         std::mt19937_64& rng) {
  return coin(rng, config.article_probability) ? "the " + phrase : phrase;
}

std::string class_phrase(const Area& a) {
  return a.subcategory ? *a.subcategory + " " + a.category : a.category;
}

std::string class_key(const Area& a) {
  return a.category + "|" + a.subcategory.value_or("");
}

double random_angle(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-kPi, kPi)(rng);
}

/// Caches the per-area uniform and Gaussian grids shared between samples.
class GridCache {
 public:
  explicit GridCache(const AreaMap& map) : map_(map) {}

  std::shared_ptr<const BeliefGrid> get(const GridRecipe& r) {
    if (r.kind == GridRecipe::Kind::Masked) {
      return std::make_shared<const BeliefGrid>(r.build(map_));
    }
    std::string key = (r.kind == GridRecipe::Kind::Uniform ? "u:" : "g:") + r.area;
    if (r.kind == GridRecipe::Kind::Gaussian) {
      key += ":" + std::to_string(r.center.x) + ":" + std::to_string(r.center.y) + ":" +
             std::to_string(r.variance);
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto grid = std::make_shared<const BeliefGrid>(r.build(map_));
    cache_.emplace(std::move(key), grid);
    return grid;
  }

 private:
  const AreaMap& map_;
  std::unordered_map<std::string, std::shared_ptr<const BeliefGrid>> cache_;
};

GridRecipe uniform_recipe(const Area& a) {
  GridRecipe r;
  r.kind = GridRecipe::Kind::Uniform;
  r.area = a.id;
  return r;
}

GridRecipe gaussian_recipe(const Area& a, double scale) {
  GridRecipe r;
  r.kind = GridRecipe::Kind::Gaussian;
  r.area = a.id;
  r.center = a.centroid;
  r.variance = scale * a.size;
  return r;
}

GridRecipe masked_recipe(const Area& a, double scale, double alpha) {
  GridRecipe r = gaussian_recipe(a, scale);
  r.kind = GridRecipe::Kind::Masked;
  r.alpha = alpha;
  return r;
}

std::string_view kind_name(GridRecipe::Kind k) {
  switch (k) {
    case GridRecipe::Kind::Uniform: return "uniform";
    case GridRecipe::Kind::Gaussian: return "gaussian";
    case GridRecipe::Kind::Masked: return "masked";
  }
  return "uniform";
}

TrainingSample gen_dummy_impl(const Lexicon& lexicon, std::mt19937_64& rng) {
  TrainingSample s;
  s.type = UpdateType::Dummy;
  s.modifier = make_modifier(lexicon, pick(lexicon.config().dummy_words, rng), true);
  return s;
}

TrainingSample gen_proximity_impl(const AreaMap& map, std::size_t key,
                                  const Lexicon& lexicon, const DatagenConfig& config,
                                  std::mt19937_64& rng, GridCache& cache) {
  const Area& a = map.area(key);
  TrainingSample s;
  s.type = UpdateType::Proximity;
  s.modifier = make_modifier(lexicon, pick(lexicon.config().proximity_words, rng), true);
  s.key_area = a.id;
  s.prior_recipe = uniform_recipe(a);
  s.posterior_recipe = gaussian_recipe(a, config.proximity_scale);
  s.prior = cache.get(*s.prior_recipe);
  s.posterior = cache.get(*s.posterior_recipe);
  return s;
}

TrainingSample gen_directional_impl(const AreaMap& map, std::size_t key,
                                    const Lexicon& lexicon, const DatagenConfig& config,
                                    std::mt19937_64& rng, GridCache& cache) {
  const Area& a = map.area(key);
  TrainingSample s;
  s.type = UpdateType::Directional;
  s.key_area = a.id;
  s.prior_recipe = uniform_recipe(a);
  s.prior = cache.get(*s.prior_recipe);
  for (int attempt = 0;; ++attempt) {
    const double alpha = random_angle(rng);
    const std::string phrase(compass_phrase(compass_index(alpha)));
    s.modifier = make_modifier(lexicon, with_article(phrase, config, rng));
    s.alpha = alpha;
    s.posterior_recipe = masked_recipe(a, config.proximity_scale, alpha);
    try {
      s.posterior = cache.get(*s.posterior_recipe);
      return s;
    } catch (const DegenerateUpdate&) {
      if (attempt >= config.max_retries) throw;
    }
  }
}

TrainingSample gen_precise_impl(const AreaMap& map, std::size_t key,
                                const Lexicon& lexicon, const DatagenConfig& config,
                                std::mt19937_64& rng, GridCache& cache,
                                std::vector<std::string>* diagnostics) {
  const Area& a = map.area(key);
  TrainingSample s;
  s.type = UpdateType::Precise;
  s.key_area = a.id;

  std::optional<std::size_t> first, second;
  for (int attempt = 0; attempt <= config.max_retries && !second; ++attempt) {
    GridRecipe recipe = coin(rng, 0.5)
                            ? gaussian_recipe(a, config.proximity_scale)
                            : masked_recipe(a, config.proximity_scale, random_angle(rng));
    std::shared_ptr<const BeliefGrid> prior;
    try {
      prior = cache.get(recipe);
    } catch (const DegenerateUpdate&) {
      continue;
    }
    std::discrete_distribution<std::size_t> draw(prior->cells().begin(),
                                                 prior->cells().end());
    std::vector<int> hits(map.size(), 0);
    for (int m = 0; m < config.prior_samples; ++m) {
      const int area = map.area_of_cell(draw(rng));
      if (area >= 0) ++hits[static_cast<std::size_t>(area)];
    }
    std::vector<std::size_t> order = map.id_order();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return hits[x] > hits[y];
    });
    if (hits[order[0]] > 0 && hits[order[1]] > 0) {
      first = order[0];
      second = order[1];
      s.prior_recipe = recipe;
      s.prior = prior;
    }
  }
  if (!second) {
    first = key;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (i == key) continue;
      const double d = distance(map.area(i).centroid, a.centroid);
      if (d < best) {
        best = d;
        second = i;
      }
    }
    s.prior_recipe = gaussian_recipe(a, config.proximity_scale);
    s.prior = cache.get(*s.prior_recipe);
    if (diagnostics) {
      diagnostics->push_back("precise sample for key area " + a.id +
                             ": prior hit fewer than two areas; using nearest neighbour " +
                             map.area(*second).id + " as competitor");
    }
  }

  const Area& a1 = map.area(*first);
  const Area& a2 = map.area(*second);
  const PreciseModifier pm = modifier_from_rules(a1, a2, config, rng);
  s.modifier = make_modifier(lexicon, pm.text);
  s.kappa = pm.kappa;
  s.alpha = pm.alpha;
  s.rule = pm.rule;
  s.target = a1.id;
  s.competitor = a2.id;
  s.posterior_recipe = uniform_recipe(a1);
  s.posterior = cache.get(*s.posterior_recipe);
  return s;
}

json rle_encode(const BeliefGrid& grid) {
  json runs = json::array();
  const auto cells = grid.cells();
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i + 1;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    runs.push_back(json::array({cells[i], j - i}));
    i = j;
  }
  return runs;
}

std::vector<double> rle_decode(const json& runs, std::size_t expected) {
  std::vector<double> cells;
  cells.reserve(expected);
  for (const auto& run : runs) {
    const double v = run.at(0).get<double>();
    const auto n = run.at(1).get<std::size_t>();
    cells.insert(cells.end(), n, v);
  }
  if (cells.size() != expected) throw std::invalid_argument("run-length grid has wrong size");
  return cells;
}

}  // namespace

json DatagenConfig::to_json() const {
  return json{{"k", k},
              {"seed", seed},
              {"prior_samples", prior_samples},
              {"proximity_scale", proximity_scale},
              {"optional_probability", optional_probability},
              {"article_probability", article_probability},
              {"identifier_probability", identifier_probability},
              {"max_retries", max_retries}};
}

DatagenConfig DatagenConfig::from_json(const json& j) {
  DatagenConfig c;
  c.k = j.value("k", c.k);
  c.seed = j.value("seed", c.seed);
  c.prior_samples = j.value("prior_samples", c.prior_samples);
  c.proximity_scale = j.value("proximity_scale", c.proximity_scale);
  c.optional_probability = j.value("optional_probability", c.optional_probability);
  c.article_probability = j.value("article_probability", c.article_probability);
  c.identifier_probability = j.value("identifier_probability", c.identifier_probability);
  c.max_retries = j.value("max_retries", c.max_retries);
  if (c.k < 1) throw std::invalid_argument("k must be at least 1");
  if (c.prior_samples < 1) throw std::invalid_argument("prior_samples must be positive");
  return c;
}

BeliefGrid GridRecipe::build(const AreaMap& map) const {
  switch (kind) {
    case Kind::Uniform:
      return uniform_over_area(map, area);
    case Kind::Gaussian:
      return gaussian_grid(map, center, variance);
    case Kind::Masked:
      return mask_half_plane(gaussian_grid(map, center, variance), center, alpha);
  }
  throw std::logic_error("unhandled grid recipe");
}

json GridRecipe::to_json() const {
  json j{{"kind", std::string(kind_name(kind))}, {"area", area}};
  if (kind != Kind::Uniform) {
    j["center"] = {center.x, center.y};
    j["variance"] = variance;
  }
  if (kind == Kind::Masked) j["alpha"] = alpha;
  return j;
}

GridRecipe GridRecipe::from_json(const json& j) {
  GridRecipe r;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    r.kind = Kind::Uniform;
  } else if (kind == "gaussian") {
    r.kind = Kind::Gaussian;
  } else if (kind == "masked") {
    r.kind = Kind::Masked;
  } else {
    throw std::invalid_argument("unknown grid kind '" + kind + "'");
  }
  r.area = j.at("area").get<std::string>();
  if (r.kind != Kind::Uniform) {
    r.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
    r.variance = j.at("variance").get<double>();
  }
  if (r.kind == Kind::Masked) r.alpha = j.at("alpha").get<double>();
  return r;
}

PreciseModifier modifier_from_rules(const Area& a1, const Area& a2,
                                    const DatagenConfig& config, std::mt19937_64& rng) {
  if (a1.id == a2.id) throw std::invalid_argument("a1 and a2 must differ");
  PreciseModifier out;

  if (coin(rng, config.identifier_probability)) {
    if (a1.name && coin(rng, 0.5)) {
      const bool sub = a1.subcategory && coin(rng, config.optional_probability);
      out.text = *a1.name + " " + (sub ? class_phrase(a1) : a1.category);
      out.rule = "name";
    } else {
      out.text = a1.category + " " + a1.id;
      out.rule = "id";
    }
    out.text = with_article(out.text, config, rng);
    return out;
  }

  const int dir = compass_index(std::atan2(a1.centroid.y - a2.centroid.y,
                                           a1.centroid.x - a2.centroid.x));
  const std::string dir_word(compass_phrase(dir));
  const bool sub = a1.subcategory && coin(rng, config.optional_probability);
  const std::string tail = sub ? class_phrase(a1) : a1.category;

  bool use_direction = false;
  if (a1.category != a2.category) {
    out.rule = "category";
    out.text = tail;
  } else if (a1.subcategory && a1.subcategory != a2.subcategory) {
    out.rule = "subcategory";
    use_direction = coin(rng, config.optional_probability);
    out.text = class_phrase(a1);
  } else {
    out.rule = "direction";
    use_direction = true;
    out.text = tail;
  }
  if (use_direction) {
    out.text = dir_word + " " + out.text;
    out.kappa = 1;
    out.alpha = compass_angle(dir);
  }
  out.text = with_article(out.text, config, rng);
  return out;
}

TrainingSample gen_dummy(const Lexicon& lexicon, const DatagenConfig&,
                         std::mt19937_64& rng) {
  return gen_dummy_impl(lexicon, rng);
}

TrainingSample gen_proximity(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                             const DatagenConfig& config, std::mt19937_64& rng) {
  GridCache cache(map);
  return gen_proximity_impl(map, key, lexicon, config, rng, cache);
}

TrainingSample gen_directional(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                               const DatagenConfig& config, std::mt19937_64& rng) {
  GridCache cache(map);
  return gen_directional_impl(map, key, lexicon, config, rng, cache);
}

TrainingSample gen_precise(const AreaMap& map, std::size_t key, const Lexicon& lexicon,
                           const DatagenConfig& config, std::mt19937_64& rng,
                           std::vector<std::string>* diagnostics) {
  GridCache cache(map);
  return gen_precise_impl(map, key, lexicon, config, rng, cache, diagnostics);
}

Dataset generate_dataset(const AreaMap& map, const Lexicon& lexicon,
                         const DatagenConfig& config) {
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  std::mt19937_64 rng(config.seed);
  GridCache cache(map);
  Dataset ds;
  ds.samples.reserve(4 * map.size() * static_cast<std::size_t>(config.k));
  for (int t = 0; t < kUpdateTypeCount; ++t) {
    for (std::size_t key = 0; key < map.size(); ++key) {
      for (int d = 0; d < config.k; ++d) {
        TrainingSample s;
        switch (static_cast<UpdateType>(t)) {
          case UpdateType::Dummy:
            s = gen_dummy_impl(lexicon, rng);
            break;
          case UpdateType::Proximity:
            s = gen_proximity_impl(map, key, lexicon, config, rng, cache);
            break;
          case UpdateType::Directional:
            s = gen_directional_impl(map, key, lexicon, config, rng, cache);
            break;
          case UpdateType::Precise:
            s = gen_precise_impl(map, key, lexicon, config, rng, cache, &ds.diagnostics);
            break;
        }
        s.id = ds.samples.size();
        ds.samples.push_back(std::move(s));
      }
    }
  }
  return ds;
}

void attach_grids(Dataset& dataset, const AreaMap& map) {
  GridCache cache(map);
  for (TrainingSample& s : dataset.samples) {
    if (s.prior_recipe && !s.prior) s.prior = cache.get(*s.prior_recipe);
    if (s.posterior_recipe && !s.posterior) s.posterior = cache.get(*s.posterior_recipe);
  }
}

json sample_to_json(const TrainingSample& s, GridEncoding encoding) {
  json j{{"id", s.id}, {"type", std::string(to_string(s.type))}, {"modifier", s.modifier.raw}};
  if (s.key_area) j["key_area"] = *s.key_area;
  auto grid = [&](const std::optional<GridRecipe>& recipe,
                  const std::shared_ptr<const BeliefGrid>& g) {
    json out = recipe->to_json();
    if (encoding == GridEncoding::InlineRle && g) out["rle"] = rle_encode(*g);
    return out;
  };
  if (s.prior_recipe) j["prior"] = grid(s.prior_recipe, s.prior);
  if (s.posterior_recipe) j["posterior"] = grid(s.posterior_recipe, s.posterior);
  if (s.alpha) j["alpha"] = *s.alpha;
  if (s.kappa) j["kappa"] = *s.kappa;
  if (s.target) j["target"] = *s.target;
  if (s.competitor) j["competitor"] = *s.competitor;
  if (!s.rule.empty()) j["rule"] = s.rule;
  return j;
}

void write_dataset(std::ostream& out, const Dataset& dataset, GridEncoding encoding) {
  for (const TrainingSample& s : dataset.samples) {
    out << sample_to_json(s, encoding).dump() << '\n';
  }
}

Dataset read_dataset(std::istream& in, const AreaMap& map, const Lexicon& lexicon) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TrainingSample s;
      s.id = j.value("id", ds.samples.size());
      s.type = update_type_from_string(j.at("type").get<std::string>());
      s.modifier = make_modifier(lexicon, j.at("modifier").get<std::string>(),
                                 s.type == UpdateType::Dummy || s.type == UpdateType::Proximity);
      if (j.contains("key_area")) s.key_area = j["key_area"].get<std::string>();
      auto grid = [&](const char* field, std::optional<GridRecipe>& recipe,
                      std::shared_ptr<const BeliefGrid>& g) {
        if (!j.contains(field)) return;
        recipe = GridRecipe::from_json(j[field]);
        if (j[field].contains("rle")) {
          g = std::make_shared<const BeliefGrid>(
              map.grid(), rle_decode(j[field]["rle"], map.grid().cell_count()));
        }
      };
      grid("prior", s.prior_recipe, s.prior);
      grid("posterior", s.posterior_recipe, s.posterior);
      if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
      if (j.contains("kappa")) s.kappa = j["kappa"].get<int>();
      if (j.contains("target")) s.target = j["target"].get<std::string>();
      if (j.contains("competitor")) s.competitor = j["competitor"].get<std::string>();
      s.rule = j.value("rule", std::string());
      if (s.target) map.index_of(*s.target);
      ds.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  attach_grids(ds, map);
  return ds;
}

// ---------------------------------------------------------------------------
// Composite queries

namespace {

struct CompositeContext {
  const AreaMap& map;
  std::vector<std::size_t> candidates;  // non-corridor areas
  std::map<std::string, std::vector<std::size_t>> classes;

  explicit CompositeContext(const AreaMap& m) : map(m) {
    for (const std::size_t i : map.id_order()) {
      if (map.area(i).category == "corridor") continue;
      candidates.push_back(i);
      classes[class_key(map.area(i))].push_back(i);
    }
  }

  const std::vector<std::size_t>& class_of(std::size_t i) const {
    return classes.at(class_key(map.area(i)));
  }

  /// Phrases that name area i and no other area.
  std::vector<std::string> landmarks(std::size_t i) const {
    const Area& a = map.area(i);
    std::vector<std::string> out{a.category + " " + a.id};
    if (a.name) out.push_back("the " + *a.name + " " + class_phrase(a));
    const auto& members = class_of(i);
    if (members.size() == 1) {
      out.push_back("the " + class_phrase(a));
      return out;
    }
    // Extreme member of its class along a compass direction, by a clear margin.
    for (int d = 0; d < kCompassCount; ++d) {
      const double ang = compass_angle(d);
      const Point e{std::cos(ang), std::sin(ang)};
      const double mine = dot(a.centroid, e);
      double rival = -std::numeric_limits<double>::infinity();
      for (const std::size_t j : members) {
        if (j != i) rival = std::max(rival, dot(map.area(j).centroid, e));
      }
      if (mine - rival >= 5.0) {
        out.push_back("the " + std::string(compass_phrase(d)) + " " + class_phrase(a));
      }
    }
    return out;
  }

  /// Areas sharing any descriptor word with the class phrase of i, outside
  /// its class.
  std::vector<std::size_t> partial_matches(std::size_t i) const {
    const auto words = split_words(class_phrase(map.area(i)));
    const std::set<std::string> wanted(words.begin(), words.end());
    const std::string key = class_key(map.area(i));
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < map.size(); ++j) {
      if (class_key(map.area(j)) == key) continue;
      for (const auto& w : map.area(j).attribute_tokens()) {
        if (wanted.count(w)) {
          out.push_back(j);
          break;
        }
      }
    }
    return out;
  }
};

constexpr double kDistanceMargin = 1.25;
constexpr double kMaxReach = 15.0;

/// Nearest area among `pool` to `from` that passes `admit`, if it beats every
/// other admitted member by kDistanceMargin and every `rivals` member outright.
std::optional<std::size_t> clear_nearest(const AreaMap& map, Point from,
                                         const std::vector<std::size_t>& pool,
                                         const std::vector<std::size_t>& rivals,
                                         const std::function<bool(std::size_t)>& admit,
                                         const std::function<bool(std::size_t)>& compete) {
  std::optional<std::size_t> best;
  double d1 = std::numeric_limits<double>::infinity();
  for (const std::size_t j : pool) {
    if (!admit(j)) continue;
    const double d = distance(map.area(j).centroid, from);
    if (d < d1) {
      d1 = d;
      best = j;
    }
  }
  if (!best || d1 > kMaxReach) return std::nullopt;
  for (const std::size_t j : pool) {
    if (j == *best || !compete(j)) continue;
    if (distance(map.area(j).centroid, from) < kDistanceMargin * d1) return std::nullopt;
  }
  for (const std::size_t j : rivals) {
    if (!compete(j)) continue;
    if (distance(map.area(j).centroid, from) <= d1) return std::nullopt;
  }
  return best;
}

}  // namespace

std::vector<CompositeQuery> gen_composite(const AreaMap& map, std::uint64_t seed, int n,
                                          int steps) {
  if (steps != 1 && steps != 3 && steps != 5) {
    throw std::invalid_argument("composite steps must be 1, 3 or 5");
  }
  if (n < 0) throw std::invalid_argument("query count must be nonnegative");
  const CompositeContext ctx(map);
  if (ctx.candidates.empty()) throw Error("map has no non-corridor areas");
  std::mt19937_64 rng(seed);
  std::vector<CompositeQuery> out;
  const long budget = 500L * std::max(n, 1);
  for (long attempt = 0; attempt < budget && static_cast<int>(out.size()) < n; ++attempt) {
    const std::size_t y = pick(ctx.candidates, rng);
    const std::string landmark = pick(ctx.landmarks(y), rng);
    if (steps == 1) {
      out.push_back({"go to " + landmark, map.area(y).id, 1, ""});
      continue;
    }
    const std::size_t proto = pick(ctx.candidates, rng);
    const auto& members = ctx.class_of(proto);
    if (members.size() < 2 || class_key(map.area(proto)) == class_key(map.area(y))) continue;
    const auto rivals = ctx.partial_matches(proto);
    const Point from = map.area(y).centroid;
    const std::string x_phrase = "the " + class_phrase(map.area(proto));

    if (steps == 3) {
      const auto goal = clear_nearest(
          map, from, members, rivals, [](std::size_t) { return true; },
          [](std::size_t) { return true; });
      if (!goal) continue;
      out.push_back({"go to " + x_phrase + " near " + landmark, map.area(*goal).id, 3,
                     map.area(y).id});
    } else {
      const int d = std::uniform_int_distribution<int>(0, kCompassCount - 1)(rng);
      const double ang = compass_angle(d);
      const Point e{std::cos(ang), std::sin(ang)};
      auto proj = [&](std::size_t j) { return dot(map.area(j).centroid - from, e); };
      const auto goal = clear_nearest(
          map, from, members, rivals, [&](std::size_t j) { return proj(j) >= 1.0; },
          [&](std::size_t j) { return proj(j) > -1.0; });
      if (!goal) continue;
      out.push_back({"go to " + x_phrase + " to the " + std::string(compass_phrase(d)) +
                         " of " + landmark,
                     map.area(*goal).id, 5, map.area(y).id});
    }
  }
  if (static_cast<int>(out.size()) < n) {
    throw Error("could only build " + std::to_string(out.size()) + " of " +
                std::to_string(n) + " " + std::to_string(steps) +
                "-step composite queries on this map");
  }
  return out;
}

json composite_to_json(const std::vector<CompositeQuery>& queries) {
  json arr = json::array();
  for (const auto& q : queries) {
    arr.push_back({{"instruction", q.instruction},
                   {"goal", q.goal},
                   {"steps", q.steps},
                   {"landmark", q.landmark}});
  }
  return arr;
}

std::vector<CompositeQuery> composite_from_json(const json& j) {
  std::vector<CompositeQuery> out;
  for (const auto& q : j) {
    out.push_back({q.at("instruction").get<std::string>(), q.at("goal").get<std::string>(),
                   q.value("steps", 0), q.value("landmark", std::string())});
  }
  return out;
}

}  // namespace groundnav
