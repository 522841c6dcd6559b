#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundnav/nnet/tape.hpp"

namespace groundnav::nnet {

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix xavier_uniform(Index rows, Index cols, std::mt19937_64& rng);

/// Gated recurrent unit; returns the final hidden state.
///
///   z = sigmoid(Wz x + Uz h + bz)
///   r = sigmoid(Wr x + Ur h + br)
///   c = tanh(Wh x + Uh (r * h) + bh)
///   h' = (1 - z) * h + z * c,   h0 = 0
class GruEncoder {
 public:
  GruEncoder() = default;
  /// Zero-initialized.
  GruEncoder(const std::string& name, Index input_width, Index hidden_width);

  void initialize(std::mt19937_64& rng);

  Index input_width() const { return input_width_; }
  Index hidden_width() const { return hidden_width_; }

  /// Recorded forward pass; gradients flow into this encoder's parameters.
  Var forward(Tape& tape, std::span<const Var> inputs);
  /// Recorded forward pass with frozen parameters.
  Var forward(Tape& tape, std::span<const Var> inputs) const;
  /// Runs a T x input_width sequence. Throws std::invalid_argument on an
  /// empty sequence or a width mismatch.
  Vector run(const Matrix& sequence) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

 private:
  template <class Self>
  static Var forward_impl(Self& self, Tape& tape, std::span<const Var> inputs);

  Index input_width_ = 0;
  Index hidden_width_ = 0;
  Parameter w_z_, u_z_, b_z_;
  Parameter w_r_, u_r_, b_r_;
  Parameter w_h_, u_h_, b_h_;
};

/// y = W x + b.
class LinearHead {
 public:
  LinearHead() = default;
  LinearHead(const std::string& name, Index input_width, Index output_width);

  void initialize(std::mt19937_64& rng);

  Index output_width() const { return weight_.value.rows(); }

  Var forward(Tape& tape, Var input);
  Var forward(Tape& tape, Var input) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

 private:
  Parameter weight_;
  Parameter bias_;
};

/// Serializes parameters by name: {"name": [[row...], ...]}.
void write_parameters(nlohmann::json& out, std::span<const Parameter* const> params);
/// Reads values by name; throws std::invalid_argument on a missing name or
/// shape mismatch.
void read_parameters(const nlohmann::json& in, std::span<Parameter* const> params);

}  // namespace groundnav::nnet
