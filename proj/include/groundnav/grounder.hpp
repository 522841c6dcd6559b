#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/belief.hpp"
#include "groundnav/map.hpp"
#include "groundnav/model.hpp"
#include "groundnav/parser.hpp"

namespace groundnav {

/// Softmax over the four update types.
std::array<double, kUpdateTypeCount> type_probabilities(const Modifier& u,
                                                        const ModelParams& params);
/// Argmax of the classifier; ties go to the lower enum value.
UpdateType classify_modifier(const Modifier& u, const ModelParams& params);

/// Direction angle in (-pi, pi); 0 = east, pi/2 = north.
double predict_direction(const Modifier& u, const ModelParams& params);

struct KappaBeta {
  double kappa = 0.5;
  double beta = 1.0;
};
KappaBeta predict_kappa_beta(const Modifier& u, const ModelParams& params);

/// Location and size a prior stands for when a proximity or directional
/// update is built around it.
///
/// Grids that carry area weights, or whose gathered weights have a top area
/// holding at least 1.5x the runner-up, reduce to that area's centroid and
/// size. Anything else falls back to the belief mean and an effective size
/// of cell_area * exp(entropy).
struct PriorReference {
  Point center;
  double size = 0.0;
  std::optional<std::size_t> area;  // dominant area index, if any
  bool fallback = false;
};
PriorReference reference_of(const BeliefGrid& prior, const AreaMap& map);

BeliefGrid dummy_update(const Modifier& u, const BeliefGrid& prior);

BeliefGrid proximity_update(const BeliefGrid& prior, const AreaMap& map,
                            double proximity_scale);
BeliefGrid proximity_update(const Modifier& u, const BeliefGrid& prior,
                            const AreaMap& map, const ModelParams& params);

/// Zeroes every cell whose center's offset from `center` has a
/// non-positive projection on e_alpha. Throws DegenerateUpdate when no mass
/// survives.
BeliefGrid mask_half_plane(const BeliefGrid& belief, Point center, double alpha);

/// Proximity Gaussian with every cell whose offset from the reference
/// center has a non-positive projection on e_alpha set to zero.
/// Throws DegenerateUpdate when no mass survives the mask.
BeliefGrid directional_update(const BeliefGrid& prior, const AreaMap& map,
                              double alpha, double proximity_scale);
BeliefGrid directional_update(const Modifier& u, const BeliefGrid& prior,
                              const AreaMap& map, const ModelParams& params);

/// Per-area directional factor over normalized centroids:
/// (sigmoid(x_i . e - min_v v . e) + 1)^kappa - 1 + beta * kappa + epsilon,
/// the minimum taken over normalized boundary vertices.
std::vector<double> gamma_factor(const AreaMap& map, double alpha, double kappa,
                                 double beta, double epsilon);

struct Attention {
  std::vector<double> weights;  // sums to 1
  std::vector<int> counts;      // matching (attribute, modifier) word pairs
  bool fallback = false;        // every count was zero; weights are uniform
};
/// Counts pairs whose match embeddings have a dot product above the
/// threshold, then normalizes per area.
Attention attention_weights(const AreaMap& map, const Lexicon& lexicon,
                            const std::vector<Token>& tokens, double threshold);
Attention attention_weights(const AreaMap& map, const Modifier& u,
                            const ModelParams& params);

/// Normalized elementwise product gamma * attention * prior. Throws
/// DegenerateUpdate naming the factors that zero out when the product is
/// all zero.
std::vector<double> combine_precise(const std::vector<double>& gamma,
                                    const std::vector<double>& attention,
                                    const std::vector<double>& prior);

struct PreciseResult {
  BeliefGrid posterior;
  std::vector<double> weights;
  std::vector<double> gamma;
  Attention attention;
  AreaWeights prior;
  double alpha = 0.0;
  KappaBeta shape;
};
PreciseResult precise_update(const Modifier& u, const BeliefGrid& prior,
                             const AreaMap& map, const ModelParams& params);

struct StepResult {
  UpdateType type;
  BeliefGrid posterior;
  std::vector<std::string> diagnostics;
};
/// Classifies `u` and runs exactly that update.
StepResult apply(const Modifier& u, const BeliefGrid& prior, const AreaMap& map,
                 const ModelParams& params);

struct RankedArea {
  std::string id;
  std::size_t index = 0;
  double weight = 0.0;
};
/// Gathered area weights sorted descending, ties by id_less.
std::vector<RankedArea> rank_areas(const BeliefGrid& belief, const AreaMap& map);

struct TraceStep {
  Modifier modifier;
  UpdateType type;
  BeliefGrid posterior;
  std::vector<std::string> diagnostics;
};

struct BeliefTrace {
  std::string instruction;
  std::string destination;
  std::vector<TraceStep> steps;
  std::vector<RankedArea> ranked;
  bool gather_degenerate = false;
  std::optional<BeliefGrid> initial;  // the chain's starting belief

  /// Last posterior, or the initial belief for an empty chain.
  const BeliefGrid& final_belief() const;
};

/// Folds `apply` over the chain starting from `prior`. DegenerateUpdate
/// errors carry the zero-based failing step.
BeliefTrace ground_chain(const std::vector<Modifier>& chain, const BeliefGrid& prior,
                         const AreaMap& map, const ModelParams& params);

/// Parses the instruction and grounds its chain from the dummy prior.
BeliefTrace ground(std::string_view instruction, const AreaMap& map,
                   const ModelParams& params);

/// First k ranked area ids (all of them when k exceeds the area count).
/// Throws std::invalid_argument for k = 0.
std::vector<std::string> top_k_areas(const BeliefTrace& trace, std::size_t k);

/// {"instruction","destination","steps":[{"index","modifier","type",
/// "diagnostics","top_area","top_weight","entropy"}],"ranked":[{"id","weight"}]}.
/// `ranked_limit` = 0 keeps every area.
nlohmann::json trace_to_json(const BeliefTrace& trace, const AreaMap& map,
                             std::size_t ranked_limit = 10);

}  // namespace groundnav
