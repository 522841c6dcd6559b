#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/datagen.hpp"
#include "groundnav/model.hpp"
#include "groundnav/nnet/tape.hpp"

namespace groundnav {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 10;
  double holdout = 0.10;
  std::uint64_t seed = 1;
  double weight_type = 1.0;
  double weight_alpha = 1.0;
  double weight_kappa = 1.0;
  double weight_area = 1.0;
  /// Disables the area term to train on the three direct supervision terms only.
  bool area_loss = true;
  Hyperparameters hyper;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

inline constexpr double kAreaLossCap = 50.0;

/// max(wrap(alpha - target)^2 - (pi/8)^2, 0).
double loss_alpha_value(double alpha, double target);

// Tape builders for the individual loss terms.
nnet::Var loss_type(nnet::Tape& tape, ModelParams& params, const Modifier& u,
                    UpdateType target);
nnet::Var loss_alpha(nnet::Tape& tape, ModelParams& params, const Modifier& u,
                     double target);
nnet::Var loss_kappa(nnet::Tape& tape, ModelParams& params, const Modifier& u,
                     int target);

/// Per-area constants of the area loss: attention times prior weight.
struct AreaLossContext {
  std::vector<double> coefficients;
  std::size_t target = 0;
};
AreaLossContext area_loss_context(const TrainingSample& sample, const AreaMap& map,
                                  const ModelParams& params);

/// -log of the precise posterior weight of the target area, capped at
/// kAreaLossCap. A capped value is a constant with no gradient.
struct AreaLoss {
  nnet::Var value;
  bool clipped = false;
};
AreaLoss loss_area(nnet::Tape& tape, ModelParams& params, const Modifier& u,
                   const AreaLossContext& context, const AreaMap& map);

struct SampleLoss {
  double type = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double area = 0.0;
  bool area_clipped = false;
  double total = 0.0;  // weighted sum of the applicable terms
};

/// Evaluates the applicable terms for the sample's type; with `backward`
/// the weighted total is differentiated into the parameters' gradients.
/// Pass a precomputed context for precise samples to skip recomputing it.
SampleLoss sample_loss(const TrainingSample& sample, const AreaMap& map,
                       ModelParams& params, const TrainConfig& config, bool backward,
                       const AreaLossContext* context = nullptr);

struct EvalReport {
  std::size_t samples = 0;
  double type_accuracy = 0.0;
  std::size_t precise_samples = 0;
  std::optional<double> area_accuracy;
  std::size_t direction_samples = 0;
  std::optional<double> direction_rate;
  std::size_t kappa_samples = 0;
  std::optional<double> kappa_accuracy;
  SampleLoss mean_loss;

  nlohmann::json to_json() const;
  std::string table() const;
};

EvalReport evaluate(const ModelParams& params, std::span<const TrainingSample> samples,
                    const AreaMap& map, const TrainConfig& config = {});

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};
/// Shuffles indices with `seed`; the last round(n * holdout) go to holdout.
Split split_dataset(std::size_t n, double holdout, std::uint64_t seed);

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
};

struct TrainResult {
  ModelParams params;
  EvalReport holdout;
  std::vector<EpochStats> history;
  Split split;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Per-sample Adam over the training split for the configured epochs.
/// Throws NumericError naming the sample on a non-finite loss or gradient.
TrainResult train(const Dataset& dataset, const AreaMap& map, ModelParams init,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

struct CompositeBucket {
  int steps = 0;  // 0 = all queries
  std::size_t queries = 0;
  std::size_t top1 = 0;
  std::size_t top5 = 0;
  std::size_t errors = 0;  // parse or degenerate failures, counted as misses

  double top1_rate() const;
  double top5_rate() const;
};

struct CompositeReport {
  std::vector<CompositeBucket> buckets;  // ascending step count
  CompositeBucket any;

  const CompositeBucket* bucket(int steps) const;
  nlohmann::json to_json() const;
  std::string table() const;
};

/// Grounds each query and scores its ranked areas against the goal,
/// bucketed by modifier-chain length.
CompositeReport benchmark_composite(const std::vector<CompositeQuery>& queries,
                                    const AreaMap& map, const ModelParams& params);

}  // namespace groundnav
