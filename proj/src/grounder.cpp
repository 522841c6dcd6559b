#include "groundnav/grounder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "forward.hpp"
#include "groundnav/compass.hpp"
#include "groundnav/error.hpp"

namespace groundnav {

using nlohmann::json;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string join_ids(const AreaMap& map, const std::vector<std::size_t>& idx,
                     std::size_t limit = 6) {
  std::string out;
  for (std::size_t i = 0; i < idx.size() && i < limit; ++i) {
    if (!out.empty()) out += ", ";
    out += map.area(idx[i]).id;
  }
  if (idx.size() > limit) out += ", ...";
  return out;
}

}  // namespace

std::array<double, kUpdateTypeCount> type_probabilities(const Modifier& u,
                                                        const ModelParams& params) {
  nnet::Tape tape;
  const nnet::Matrix& z = tape.value(detail::type_logits(tape, params, u.tokens));
  const double m = z.maxCoeff();
  std::array<double, kUpdateTypeCount> p{};
  double total = 0.0;
  for (int t = 0; t < kUpdateTypeCount; ++t) {
    p[static_cast<std::size_t>(t)] = std::exp(z(t) - m);
    total += p[static_cast<std::size_t>(t)];
  }
  for (double& v : p) v /= total;
  return p;
}

UpdateType classify_modifier(const Modifier& u, const ModelParams& params) {
  nnet::Tape tape;
  const nnet::Matrix& z = tape.value(detail::type_logits(tape, params, u.tokens));
  int best = 0;
  for (int t = 1; t < kUpdateTypeCount; ++t) {
    if (z(t) > z(best)) best = t;
  }
  return static_cast<UpdateType>(best);
}

double predict_direction(const Modifier& u, const ModelParams& params) {
  nnet::Tape tape;
  return tape.scalar_value(detail::alpha(tape, params, u.tokens));
}

KappaBeta predict_kappa_beta(const Modifier& u, const ModelParams& params) {
  nnet::Tape tape;
  const auto [zk, zb] = detail::kappa_beta_logits(tape, params, u.tokens);
  return {sigmoid(tape.scalar_value(zk)), std::exp(tape.scalar_value(zb))};
}

PriorReference reference_of(const BeliefGrid& prior, const AreaMap& map) {
  PriorReference ref;
  std::optional<std::size_t> dominant;
  if (const auto& carried = prior.area_weights()) {
    // id_order makes ties resolve to the lowest id.
    for (const std::size_t i : map.id_order()) {
      if (!dominant || (*carried)[i] > (*carried)[*dominant]) dominant = i;
    }
  } else {
    const AreaWeights g = gather_area_weights(prior, map);
    if (!g.degenerate) {
      std::size_t top = map.id_order().front();
      for (const std::size_t i : map.id_order()) {
        if (g.weights[i] > g.weights[top]) top = i;
      }
      double runner_up = 0.0;
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (i != top) runner_up = std::max(runner_up, g.weights[i]);
      }
      if (g.weights[top] >= 1.5 * runner_up) dominant = top;
    }
  }
  if (dominant) {
    ref.area = dominant;
    ref.center = map.area(*dominant).centroid;
    ref.size = map.area(*dominant).size;
    return ref;
  }
  ref.fallback = true;
  ref.center = prior.mean();
  ref.size = map.cell_area() * std::exp(prior.entropy());
  return ref;
}

BeliefGrid dummy_update(const Modifier&, const BeliefGrid& prior) { return prior; }

BeliefGrid proximity_update(const BeliefGrid& prior, const AreaMap& map,
                            double proximity_scale) {
  const PriorReference ref = reference_of(prior, map);
  if (!(ref.size > 0.0) || !std::isfinite(ref.size)) {
    throw DegenerateUpdate("proximity update: prior has no usable extent");
  }
  return gaussian_grid(map, ref.center, proximity_scale * ref.size);
}

BeliefGrid proximity_update(const Modifier&, const BeliefGrid& prior,
                            const AreaMap& map, const ModelParams& params) {
  return proximity_update(prior, map, params.hyper.proximity_scale);
}

BeliefGrid mask_half_plane(const BeliefGrid& belief, Point center, double alpha) {
  const Point e{std::cos(alpha), std::sin(alpha)};
  const GridGeometry& grid = belief.geometry();
  std::vector<double> mass(belief.cells().begin(), belief.cells().end());
  double kept = 0.0;
  for (std::size_t c = 0; c < mass.size(); ++c) {
    if (mass[c] == 0.0) continue;
    if (dot(grid.cell_center(c) - center, e) <= 0.0) {
      mass[c] = 0.0;
    } else {
      kept += mass[c];
    }
  }
  if (!(kept > 0.0)) {
    std::ostringstream msg;
    msg << "directional update: mask toward " << compass_phrase(compass_index(alpha))
        << " removes all belief mass";
    throw DegenerateUpdate(msg.str());
  }
  return BeliefGrid(grid, std::move(mass));
}

BeliefGrid directional_update(const BeliefGrid& prior, const AreaMap& map,
                              double alpha, double proximity_scale) {
  const PriorReference ref = reference_of(prior, map);
  if (!(ref.size > 0.0) || !std::isfinite(ref.size)) {
    throw DegenerateUpdate("directional update: prior has no usable extent");
  }
  return mask_half_plane(gaussian_grid(map, ref.center, proximity_scale * ref.size),
                         ref.center, alpha);
}

BeliefGrid directional_update(const Modifier& u, const BeliefGrid& prior,
                              const AreaMap& map, const ModelParams& params) {
  return directional_update(prior, map, predict_direction(u, params),
                            params.hyper.proximity_scale);
}

std::vector<double> gamma_factor(const AreaMap& map, double alpha, double kappa,
                                 double beta, double epsilon) {
  const Point e{std::cos(alpha), std::sin(alpha)};
  double lowest = std::numeric_limits<double>::infinity();
  for (const Point& v : map.normalized_boundary()) lowest = std::min(lowest, dot(v, e));
  std::vector<double> gamma(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double s = sigmoid(dot(map.normalized_centroids()[i], e) - lowest);
    gamma[i] = std::pow(s + 1.0, kappa) - 1.0 + beta * kappa + epsilon;
  }
  return gamma;
}

Attention attention_weights(const AreaMap& map, const Lexicon& lexicon,
                            const std::vector<Token>& tokens, double threshold) {
  Attention out;
  out.counts.assign(map.size(), 0);
  out.weights.assign(map.size(), 0.0);
  const Eigen::MatrixXd u = lexicon.embed_match(tokens);
  long total = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Eigen::MatrixXd m = lexicon.embed_match(lexicon.encode(map.area(i).attribute_tokens()));
    const Eigen::MatrixXd sim = m * u.transpose();
    out.counts[i] = static_cast<int>((sim.array() > threshold).count());
    total += out.counts[i];
  }
  if (total == 0) {
    out.fallback = true;
    std::fill(out.weights.begin(), out.weights.end(), 1.0 / static_cast<double>(map.size()));
    return out;
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.weights[i] = static_cast<double>(out.counts[i]) / static_cast<double>(total);
  }
  return out;
}

Attention attention_weights(const AreaMap& map, const Modifier& u,
                            const ModelParams& params) {
  return attention_weights(map, params.lexicon, u.tokens, params.hyper.match_threshold);
}

std::vector<double> combine_precise(const std::vector<double>& gamma,
                                    const std::vector<double>& attention,
                                    const std::vector<double>& prior) {
  if (gamma.size() != attention.size() || gamma.size() != prior.size()) {
    throw std::invalid_argument("precise factors differ in length");
  }
  std::vector<double> w(gamma.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = gamma[i] * attention[i] * prior[i];
    total += w[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    bool attn_prior_overlap = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (attention[i] > 0.0 && prior[i] > 0.0) attn_prior_overlap = true;
    }
    std::string why = attn_prior_overlap
                          ? "directional factor is zero wherever attention and prior overlap"
                          : "attention and prior weights have disjoint support";
    throw DegenerateUpdate("precise update: all area weights are zero (" + why + ")");
  }
  for (double& v : w) v /= total;
  return w;
}

PreciseResult precise_update(const Modifier& u, const BeliefGrid& prior,
                             const AreaMap& map, const ModelParams& params) {
  const double alpha = predict_direction(u, params);
  const KappaBeta shape = predict_kappa_beta(u, params);
  std::vector<double> gamma =
      gamma_factor(map, alpha, shape.kappa, shape.beta, params.hyper.gamma_floor);
  Attention attention = attention_weights(map, u, params);
  AreaWeights w_prev = gather_area_weights(prior, map);
  std::vector<double> weights;
  try {
    weights = combine_precise(gamma, attention.weights, w_prev.weights);
  } catch (const DegenerateUpdate& e) {
    std::vector<std::size_t> matched;
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (attention.counts[i] > 0) matched.push_back(i);
    }
    std::string detail = std::string(e.what()) + "; modifier '" + u.raw + "' matches ";
    detail += matched.empty() ? "no area" : "areas [" + join_ids(map, matched) + "]";
    throw DegenerateUpdate(detail);
  }
  BeliefGrid posterior = scatter_area_weights(weights, map);
  return PreciseResult{std::move(posterior), std::move(weights), std::move(gamma),
                       std::move(attention), std::move(w_prev), alpha, shape};
}

StepResult apply(const Modifier& u, const BeliefGrid& prior, const AreaMap& map,
                 const ModelParams& params) {
  const UpdateType type = classify_modifier(u, params);
  switch (type) {
    case UpdateType::Dummy:
      return {type, dummy_update(u, prior), {}};
    case UpdateType::Proximity: {
      std::vector<std::string> diag;
      if (reference_of(prior, map).fallback) {
        diag.push_back("prior has no dominant area; using belief mean and entropy size");
      }
      return {type, proximity_update(u, prior, map, params), std::move(diag)};
    }
    case UpdateType::Directional: {
      std::vector<std::string> diag;
      if (reference_of(prior, map).fallback) {
        diag.push_back("prior has no dominant area; using belief mean and entropy size");
      }
      return {type, directional_update(u, prior, map, params), std::move(diag)};
    }
    case UpdateType::Precise: {
      PreciseResult r = precise_update(u, prior, map, params);
      std::vector<std::string> diag;
      if (r.attention.fallback) {
        diag.push_back("no area attribute matches '" + u.raw + "'; attention is uniform");
      }
      if (r.prior.degenerate) {
        diag.push_back("prior holds no mass inside any area; prior weights are uniform");
      }
      return {type, std::move(r.posterior), std::move(diag)};
    }
  }
  throw std::logic_error("unhandled update type");
}

std::vector<RankedArea> rank_areas(const BeliefGrid& belief, const AreaMap& map) {
  const AreaWeights g = gather_area_weights(belief, map);
  std::vector<RankedArea> ranked;
  ranked.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    ranked.push_back({map.area(i).id, i, g.weights[i]});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedArea& a, const RankedArea& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return id_less(a.id, b.id);
  });
  return ranked;
}

const BeliefGrid& BeliefTrace::final_belief() const {
  if (!steps.empty()) return steps.back().posterior;
  if (!initial) throw std::logic_error("belief trace has no initial belief");
  return *initial;
}

BeliefTrace ground_chain(const std::vector<Modifier>& chain, const BeliefGrid& prior,
                         const AreaMap& map, const ModelParams& params) {
  BeliefTrace trace;
  trace.initial = prior;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const BeliefGrid& current = trace.final_belief();
    try {
      StepResult r = apply(chain[k], current, map, params);
      trace.steps.push_back(
          {chain[k], r.type, std::move(r.posterior), std::move(r.diagnostics)});
    } catch (const DegenerateUpdate& e) {
      throw e.at_step(static_cast<int>(k));
    }
  }
  trace.gather_degenerate = gather_area_weights(trace.final_belief(), map).degenerate;
  trace.ranked = rank_areas(trace.final_belief(), map);
  return trace;
}

BeliefTrace ground(std::string_view instruction, const AreaMap& map,
                   const ModelParams& params) {
  const std::string destination =
      extract_destination(instruction, params.lexicon.config());
  const auto chain = parse_modifier_chain(destination, params.lexicon, map.token_cap());
  BeliefTrace trace = ground_chain(chain, dummy_prior(map), map, params);
  trace.instruction = std::string(instruction);
  trace.destination = destination;
  return trace;
}

std::vector<std::string> top_k_areas(const BeliefTrace& trace, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < trace.ranked.size() && i < k; ++i) {
    out.push_back(trace.ranked[i].id);
  }
  return out;
}

json trace_to_json(const BeliefTrace& trace, const AreaMap& map,
                   std::size_t ranked_limit) {
  json steps = json::array();
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const TraceStep& s = trace.steps[k];
    const auto ranked = rank_areas(s.posterior, map);
    steps.push_back({{"index", k},
                     {"modifier", s.modifier.raw},
                     {"type", std::string(to_string(s.type))},
                     {"diagnostics", s.diagnostics},
                     {"top_area", ranked.front().id},
                     {"top_weight", ranked.front().weight},
                     {"entropy", s.posterior.entropy()}});
  }
  json ranked = json::array();
  for (std::size_t i = 0; i < trace.ranked.size(); ++i) {
    if (ranked_limit != 0 && i >= ranked_limit) break;
    ranked.push_back({{"id", trace.ranked[i].id}, {"weight", trace.ranked[i].weight}});
  }
  return json{{"instruction", trace.instruction},
              {"destination", trace.destination},
              {"steps", std::move(steps)},
              {"ranked", std::move(ranked)},
              {"gather_degenerate", trace.gather_degenerate}};
}

}  // namespace groundnav
