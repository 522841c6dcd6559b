#include "groundnav/nnet/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include <nlohmann/json.hpp>

namespace groundnav::nnet {

Matrix xavier_uniform(Index rows, Index cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m(i) = dist(rng);
  return m;
}

GruEncoder::GruEncoder(const std::string& name, Index input_width,
                       Index hidden_width)
    : input_width_(input_width),
      hidden_width_(hidden_width),
      w_z_(name + ".w_z", Matrix::Zero(hidden_width, input_width)),
      u_z_(name + ".u_z", Matrix::Zero(hidden_width, hidden_width)),
      b_z_(name + ".b_z", Matrix::Zero(hidden_width, 1)),
      w_r_(name + ".w_r", Matrix::Zero(hidden_width, input_width)),
      u_r_(name + ".u_r", Matrix::Zero(hidden_width, hidden_width)),
      b_r_(name + ".b_r", Matrix::Zero(hidden_width, 1)),
      w_h_(name + ".w_h", Matrix::Zero(hidden_width, input_width)),
      u_h_(name + ".u_h", Matrix::Zero(hidden_width, hidden_width)),
      b_h_(name + ".b_h", Matrix::Zero(hidden_width, 1)) {}

void GruEncoder::initialize(std::mt19937_64& rng) {
  for (Parameter* w : {&w_z_, &w_r_, &w_h_, &u_z_, &u_r_, &u_h_}) {
    w->value = xavier_uniform(w->value.rows(), w->value.cols(), rng);
  }
  for (Parameter* b : {&b_z_, &b_r_, &b_h_}) b->value.setZero();
  for (Parameter* p : parameters()) p->zero_grad();
}

template <class Self>
Var GruEncoder::forward_impl(Self& self, Tape& tape, std::span<const Var> inputs) {
  if (inputs.empty()) throw std::invalid_argument("GRU input sequence is empty");
  auto leaf = [&tape](auto& p) {
    if constexpr (std::is_const_v<Self>) {
      return tape.frozen(p);
    } else {
      return tape.param(p);
    }
  };
  const Var wz = leaf(self.w_z_), uz = leaf(self.u_z_), bz = leaf(self.b_z_);
  const Var wr = leaf(self.w_r_), ur = leaf(self.u_r_), br = leaf(self.b_r_);
  const Var wh = leaf(self.w_h_), uh = leaf(self.u_h_), bh = leaf(self.b_h_);

  Var h = tape.constant(Matrix::Zero(self.hidden_width_, 1));
  for (const Var x : inputs) {
    const Matrix& xv = tape.value(x);
    if (xv.rows() != self.input_width_ || xv.cols() != 1) {
      throw std::invalid_argument("GRU input width mismatch");
    }
    const Var z = tape.sigmoid(
        tape.add(tape.add(tape.matmul(wz, x), tape.matmul(uz, h)), bz));
    const Var r = tape.sigmoid(
        tape.add(tape.add(tape.matmul(wr, x), tape.matmul(ur, h)), br));
    const Var c = tape.tanh(tape.add(
        tape.add(tape.matmul(wh, x), tape.matmul(uh, tape.mul(r, h))), bh));
    // h' = h + z * (c - h)
    h = tape.add(h, tape.mul(z, tape.sub(c, h)));
  }
  return h;
}

Var GruEncoder::forward(Tape& tape, std::span<const Var> inputs) {
  return forward_impl(*this, tape, inputs);
}

Var GruEncoder::forward(Tape& tape, std::span<const Var> inputs) const {
  return forward_impl(*this, tape, inputs);
}

Vector GruEncoder::run(const Matrix& sequence) const {
  if (sequence.rows() == 0) throw std::invalid_argument("GRU input sequence is empty");
  if (sequence.cols() != input_width_) {
    throw std::invalid_argument("GRU input width mismatch");
  }
  Tape tape;
  std::vector<Var> inputs;
  for (Index t = 0; t < sequence.rows(); ++t) {
    inputs.push_back(tape.constant(sequence.row(t).transpose()));
  }
  return tape.value(forward(tape, inputs));
}

std::vector<Parameter*> GruEncoder::parameters() {
  return {&w_z_, &u_z_, &b_z_, &w_r_, &u_r_, &b_r_, &w_h_, &u_h_, &b_h_};
}

std::vector<const Parameter*> GruEncoder::parameters() const {
  return {&w_z_, &u_z_, &b_z_, &w_r_, &u_r_, &b_r_, &w_h_, &u_h_, &b_h_};
}

LinearHead::LinearHead(const std::string& name, Index input_width,
                       Index output_width)
    : weight_(name + ".weight", Matrix::Zero(output_width, input_width)),
      bias_(name + ".bias", Matrix::Zero(output_width, 1)) {}

void LinearHead::initialize(std::mt19937_64& rng) {
  weight_.value = xavier_uniform(weight_.value.rows(), weight_.value.cols(), rng);
  bias_.value.setZero();
  weight_.zero_grad();
  bias_.zero_grad();
}

Var LinearHead::forward(Tape& tape, Var input) {
  return tape.add(tape.matmul(tape.param(weight_), input), tape.param(bias_));
}

Var LinearHead::forward(Tape& tape, Var input) const {
  return tape.add(tape.matmul(tape.frozen(weight_), input), tape.frozen(bias_));
}

std::vector<Parameter*> LinearHead::parameters() { return {&weight_, &bias_}; }
std::vector<const Parameter*> LinearHead::parameters() const {
  return {&weight_, &bias_};
}

void write_parameters(nlohmann::json& out, std::span<const Parameter* const> params) {
  for (const Parameter* p : params) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < p->value.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(p->value.cols()));
      for (Index c = 0; c < p->value.cols(); ++c) {
        row[static_cast<std::size_t>(c)] = p->value(r, c);
      }
      rows.push_back(std::move(row));
    }
    out[p->name] = std::move(rows);
  }
}

void read_parameters(const nlohmann::json& in, std::span<Parameter* const> params) {
  for (Parameter* p : params) {
    if (!in.contains(p->name)) {
      throw std::invalid_argument("model file lacks parameter '" + p->name + "'");
    }
    const auto& rows = in.at(p->name);
    if (static_cast<Index>(rows.size()) != p->value.rows()) {
      throw std::invalid_argument("parameter '" + p->name + "' has wrong shape");
    }
    for (Index r = 0; r < p->value.rows(); ++r) {
      const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
      if (static_cast<Index>(row.size()) != p->value.cols()) {
        throw std::invalid_argument("parameter '" + p->name + "' has wrong shape");
      }
      for (Index c = 0; c < p->value.cols(); ++c) {
        p->value(r, c) = row[static_cast<std::size_t>(c)];
      }
    }
    p->zero_grad();
  }
}

}  // namespace groundnav::nnet
