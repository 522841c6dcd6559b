#pragma once

// Tape builders shared by inference (const params, frozen leaves) and
// training (mutable params, gradient leaves).

#include <type_traits>
#include <utility>
#include <vector>

#include "groundnav/compass.hpp"
#include "groundnav/model.hpp"
#include "groundnav/nnet/tape.hpp"

namespace groundnav::detail {

template <class Params>
std::vector<nnet::Var> embed_tokens(nnet::Tape& tape, Params& m,
                                    const std::vector<Token>& tokens) {
  std::vector<nnet::Var> xs;
  xs.reserve(tokens.size());
  for (const Token& t : tokens) {
    const auto row = static_cast<nnet::Index>(t.vocab_index);
    if constexpr (std::is_const_v<Params>) {
      xs.push_back(tape.frozen_row(m.embeddings, row));
    } else {
      xs.push_back(tape.row(m.embeddings, row));
    }
  }
  return xs;
}

/// 4x1 classifier logits.
template <class Params>
nnet::Var type_logits(nnet::Tape& tape, Params& m, const std::vector<Token>& tokens) {
  const auto xs = embed_tokens(tape, m, tokens);
  return m.type_head.forward(tape, m.type_encoder.forward(tape, xs));
}

/// alpha = pi * tanh(head).
template <class Params>
nnet::Var alpha(nnet::Tape& tape, Params& m, const std::vector<Token>& tokens) {
  const auto xs = embed_tokens(tape, m, tokens);
  const nnet::Var z = m.direction_head.forward(tape, m.direction_encoder.forward(tape, xs));
  return tape.scale(tape.tanh(z), kPi);
}

/// (kappa logit, log beta) from the shared shape encoder.
template <class Params>
std::pair<nnet::Var, nnet::Var> kappa_beta_logits(nnet::Tape& tape, Params& m,
                                                  const std::vector<Token>& tokens) {
  const auto xs = embed_tokens(tape, m, tokens);
  const nnet::Var h = m.shape_encoder.forward(tape, xs);
  return {m.kappa_head.forward(tape, h), m.beta_head.forward(tape, h)};
}

}  // namespace groundnav::detail
