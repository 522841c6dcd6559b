#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace groundnav::nnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A trainable tensor with its accumulated gradient.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string name, Matrix initial)
      : name(std::move(name)),
        value(std::move(initial)),
        grad(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
  Index size() const { return value.size(); }
};

/// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t id() const { return id_; }
  bool valid() const { return id_ != kNone; }

 private:
  friend class Tape;
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  explicit Var(std::size_t id) : id_(id) {}
  std::size_t id_ = kNone;
};

/// Records a forward computation over dense matrices and replays it in
/// reverse to accumulate gradients into Parameters.
///
/// Column vectors are n x 1 matrices. Binary elementwise ops accept a 1x1
/// right operand as a broadcast scalar. A tape is single-use and not
/// thread-safe; build one per forward pass.
class Tape {
 public:
  Var constant(Matrix value);
  Var scalar(double value);
  /// Leaf whose gradient is accumulated into `p.grad` by backward().
  Var param(Parameter& p);
  /// Leaf reading `p` without gradient.
  Var frozen(const Parameter& p);
  /// Row `r` of an embedding table as a column vector.
  Var row(Parameter& table, Index r);
  Var frozen_row(const Parameter& table, Index r);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double k);
  Var shift(Var a, double k);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var cos(Var a);
  Var sin(Var a);
  Var relu(Var a);
  Var sum(Var a);
  Var element(Var a, Index flat_index);
  /// -log softmax(logits)[target] for a column vector of logits.
  Var softmax_cross_entropy(Var logits, Index target);
  /// Binary cross-entropy of sigmoid(logit) against target in [0, 1].
  Var bce_with_logits(Var logit, double target);

  const Matrix& value(Var v) const { return nodes_.at(v.id()).value; }
  double scalar_value(Var v) const;
  /// Gradient of the last backward() root with respect to `v`.
  const Matrix& grad(Var v) const { return nodes_.at(v.id()).grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Reverse pass from a 1x1 root. Throws std::invalid_argument otherwise.
  void backward(Var root);

 private:
  enum class Op {
    kConstant, kParam, kRow, kMatmul, kAdd, kSub, kMul, kScale, kShift,
    kSigmoid, kTanh, kExp, kLog, kCos, kSin, kRelu, kSum, kElement,
    kSoftmaxXent, kBceLogits
  };
  struct Node {
    Op op = Op::kConstant;
    std::size_t a = Var::kNone;
    std::size_t b = Var::kNone;
    double k = 0.0;
    Index index = 0;
    Parameter* param = nullptr;
    Matrix value;
    Matrix grad;
  };

  Var push(Node node);
  const Node& node(Var v) const { return nodes_.at(v.id()); }

  std::vector<Node> nodes_;
};

}  // namespace groundnav::nnet
