#include "groundnav/nnet/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace groundnav::nnet {

namespace {

void require_same_or_scalar(const Matrix& a, const Matrix& b, const char* op) {
  const bool same = a.rows() == b.rows() && a.cols() == b.cols();
  const bool scalar = b.rows() == 1 && b.cols() == 1;
  if (!same && !scalar) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

bool is_broadcast(const Matrix& a, const Matrix& b) {
  return b.size() == 1 && a.size() != 1;
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::scalar(double value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return constant(std::move(m));
}

Var Tape::param(Parameter& p) {
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
    p.zero_grad();
  }
  Node n;
  n.op = Op::kParam;
  n.param = &p;
  n.value = p.value;
  return push(std::move(n));
}

Var Tape::frozen(const Parameter& p) { return constant(p.value); }

Var Tape::row(Parameter& table, Index r) {
  if (r < 0 || r >= table.value.rows()) {
    throw std::out_of_range("embedding row out of range");
  }
  if (table.grad.rows() != table.value.rows() ||
      table.grad.cols() != table.value.cols()) {
    table.zero_grad();
  }
  Node n;
  n.op = Op::kRow;
  n.param = &table;
  n.index = r;
  n.value = table.value.row(r).transpose();
  return push(std::move(n));
}

Var Tape::frozen_row(const Parameter& table, Index r) {
  if (r < 0 || r >= table.value.rows()) {
    throw std::out_of_range("embedding row out of range");
  }
  return constant(table.value.row(r).transpose());
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) throw std::invalid_argument("matmul: shape mismatch");
  Node n;
  n.op = Op::kMatmul;
  n.a = a.id();
  n.b = b.id();
  n.value = av * bv;
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  require_same_or_scalar(av, bv, "add");
  Node n;
  n.op = Op::kAdd;
  n.a = a.id();
  n.b = b.id();
  n.value = is_broadcast(av, bv) ? Matrix(av.array() + bv(0, 0)) : Matrix(av + bv);
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  require_same_or_scalar(av, bv, "sub");
  Node n;
  n.op = Op::kSub;
  n.a = a.id();
  n.b = b.id();
  n.value = is_broadcast(av, bv) ? Matrix(av.array() - bv(0, 0)) : Matrix(av - bv);
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  require_same_or_scalar(av, bv, "mul");
  Node n;
  n.op = Op::kMul;
  n.a = a.id();
  n.b = b.id();
  n.value = is_broadcast(av, bv) ? Matrix(av * bv(0, 0))
                                 : Matrix(av.cwiseProduct(bv));
  return push(std::move(n));
}

Var Tape::scale(Var a, double k) {
  Node n;
  n.op = Op::kScale;
  n.a = a.id();
  n.k = k;
  n.value = value(a) * k;
  return push(std::move(n));
}

Var Tape::shift(Var a, double k) {
  Node n;
  n.op = Op::kShift;
  n.a = a.id();
  n.k = k;
  n.value = value(a).array() + k;
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.op = Op::kSigmoid;
  n.a = a.id();
  n.value = value(a).unaryExpr([](double x) { return stable_sigmoid(x); });
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.op = Op::kTanh;
  n.a = a.id();
  n.value = value(a).array().tanh();
  return push(std::move(n));
}

Var Tape::exp(Var a) {
  Node n;
  n.op = Op::kExp;
  n.a = a.id();
  n.value = value(a).array().exp();
  return push(std::move(n));
}

Var Tape::log(Var a) {
  Node n;
  n.op = Op::kLog;
  n.a = a.id();
  n.value = value(a).array().log();
  return push(std::move(n));
}

Var Tape::cos(Var a) {
  Node n;
  n.op = Op::kCos;
  n.a = a.id();
  n.value = value(a).array().cos();
  return push(std::move(n));
}

Var Tape::sin(Var a) {
  Node n;
  n.op = Op::kSin;
  n.a = a.id();
  n.value = value(a).array().sin();
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Node n;
  n.op = Op::kRelu;
  n.a = a.id();
  n.value = value(a).cwiseMax(0.0);
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.op = Op::kSum;
  n.a = a.id();
  n.value = Matrix::Constant(1, 1, value(a).sum());
  return push(std::move(n));
}

Var Tape::element(Var a, Index flat_index) {
  const Matrix& av = value(a);
  if (flat_index < 0 || flat_index >= av.size()) {
    throw std::out_of_range("element index out of range");
  }
  Node n;
  n.op = Op::kElement;
  n.a = a.id();
  n.index = flat_index;
  n.value = Matrix::Constant(1, 1, av(flat_index));
  return push(std::move(n));
}

Var Tape::softmax_cross_entropy(Var logits, Index target) {
  const Matrix& z = value(logits);
  if (z.cols() != 1) throw std::invalid_argument("logits must be a column vector");
  if (target < 0 || target >= z.rows()) {
    throw std::out_of_range("softmax target out of range");
  }
  const double peak = z.maxCoeff();
  const double log_norm = peak + std::log((z.array() - peak).exp().sum());
  Node n;
  n.op = Op::kSoftmaxXent;
  n.a = logits.id();
  n.index = target;
  n.value = Matrix::Constant(1, 1, log_norm - z(target, 0));
  return push(std::move(n));
}

Var Tape::bce_with_logits(Var logit, double target) {
  const Matrix& z = value(logit);
  if (z.size() != 1) throw std::invalid_argument("bce expects a scalar logit");
  const double x = z(0, 0);
  // softplus(x) - x * t, evaluated without overflow.
  const double softplus = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  Node n;
  n.op = Op::kBceLogits;
  n.a = logit.id();
  n.k = target;
  n.value = Matrix::Constant(1, 1, softplus - x * target);
  return push(std::move(n));
}

double Tape::scalar_value(Var v) const {
  const Matrix& m = value(v);
  if (m.size() != 1) throw std::invalid_argument("value is not a scalar");
  return m(0, 0);
}

void Tape::backward(Var root) {
  const Matrix& rv = value(root);
  if (rv.size() != 1) {
    throw std::invalid_argument("backward requires a scalar (1x1) loss root");
  }
  for (Node& n : nodes_) n.grad.setZero(n.value.rows(), n.value.cols());
  nodes_[root.id()].grad(0, 0) = 1.0;

  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    const Matrix& g = n.grad;
    if (g.isZero(0.0) && n.op != Op::kParam) continue;
    switch (n.op) {
      case Op::kConstant:
        break;
      case Op::kParam:
        n.param->grad += g;
        break;
      case Op::kRow:
        n.param->grad.row(n.index) += g.transpose();
        break;
      case Op::kMatmul: {
        Node& a = nodes_[n.a];
        Node& b = nodes_[n.b];
        a.grad += g * b.value.transpose();
        b.grad += a.value.transpose() * g;
        break;
      }
      case Op::kAdd:
      case Op::kSub: {
        const double sign = n.op == Op::kAdd ? 1.0 : -1.0;
        Node& a = nodes_[n.a];
        Node& b = nodes_[n.b];
        a.grad += g;
        if (is_broadcast(a.value, b.value)) {
          b.grad(0, 0) += sign * g.sum();
        } else {
          b.grad += sign * g;
        }
        break;
      }
      case Op::kMul: {
        Node& a = nodes_[n.a];
        Node& b = nodes_[n.b];
        if (is_broadcast(a.value, b.value)) {
          a.grad += g * b.value(0, 0);
          b.grad(0, 0) += g.cwiseProduct(a.value).sum();
        } else {
          const Matrix ga = g.cwiseProduct(b.value);
          const Matrix gb = g.cwiseProduct(a.value);
          a.grad += ga;
          b.grad += gb;
        }
        break;
      }
      case Op::kScale:
        nodes_[n.a].grad += n.k * g;
        break;
      case Op::kShift:
        nodes_[n.a].grad += g;
        break;
      case Op::kSigmoid:
        nodes_[n.a].grad.array() +=
            g.array() * n.value.array() * (1.0 - n.value.array());
        break;
      case Op::kTanh:
        nodes_[n.a].grad.array() +=
            g.array() * (1.0 - n.value.array().square());
        break;
      case Op::kExp:
        nodes_[n.a].grad.array() += g.array() * n.value.array();
        break;
      case Op::kLog: {
        Node& a = nodes_[n.a];
        a.grad.array() += g.array() / a.value.array();
        break;
      }
      case Op::kCos: {
        Node& a = nodes_[n.a];
        a.grad.array() -= g.array() * a.value.array().sin();
        break;
      }
      case Op::kSin: {
        Node& a = nodes_[n.a];
        a.grad.array() += g.array() * a.value.array().cos();
        break;
      }
      case Op::kRelu: {
        Node& a = nodes_[n.a];
        a.grad.array() +=
            g.array() * (a.value.array() > 0.0).cast<double>();
        break;
      }
      case Op::kSum:
        nodes_[n.a].grad.array() += g(0, 0);
        break;
      case Op::kElement:
        nodes_[n.a].grad(n.index) += g(0, 0);
        break;
      case Op::kSoftmaxXent: {
        Node& a = nodes_[n.a];
        const double peak = a.value.maxCoeff();
        Matrix p = (a.value.array() - peak).exp();
        p /= p.sum();
        p(n.index, 0) -= 1.0;
        a.grad += g(0, 0) * p;
        break;
      }
      case Op::kBceLogits: {
        Node& a = nodes_[n.a];
        a.grad(0, 0) += g(0, 0) * (stable_sigmoid(a.value(0, 0)) - n.k);
        break;
      }
    }
  }
}

}  // namespace groundnav::nnet
