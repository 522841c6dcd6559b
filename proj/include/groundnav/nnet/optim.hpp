#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "groundnav/nnet/tape.hpp"

namespace groundnav::nnet {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction over a fixed parameter set.
class AdamState {
 public:
  AdamState(std::vector<Parameter*> params, AdamConfig config = {});

  /// Applies one update from each parameter's `grad`, then clears the
  /// gradients. Throws NumericError naming the parameter on a non-finite
  /// gradient; no parameter is modified in that case.
  void step();

  long steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  const std::vector<Parameter*>& parameters() const { return params_; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Matrix> first_;
  std::vector<Matrix> second_;
  long steps_ = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

/// Compares analytic gradients against central differences.
///
/// `loss(true)` must return the loss and accumulate gradients into the
/// parameters' `grad`; `loss(false)` only evaluates. The relative error of
/// one entry is |a - n| / max(|a|, |n|, floor); the floor keeps entries
/// whose true gradient is zero from dividing by rounding noise.
GradCheckResult finite_diff_check(const std::function<double(bool)>& loss,
                                  std::span<Parameter* const> params,
                                  double step = 1e-4, double floor = 1e-4);

}  // namespace groundnav::nnet
