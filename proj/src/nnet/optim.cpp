#include "groundnav/nnet/optim.hpp"

#include <algorithm>
#include <cmath>

#include "groundnav/error.hpp"

namespace groundnav::nnet {

AdamState::AdamState(std::vector<Parameter*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  first_.reserve(params_.size());
  second_.reserve(params_.size());
  for (Parameter* p : params_) {
    first_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    second_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols()) {
      p->zero_grad();
    }
  }
}

void AdamState::step() {
  for (const Parameter* p : params_) {
    if (!p->grad.allFinite()) {
      throw NumericError("non-finite gradient in parameter '" + p->name +
                         "' at step " + std::to_string(steps_ + 1));
    }
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correct1 = 1.0 - std::pow(config_.beta1, t);
  const double correct2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    Matrix& m = first_[i];
    Matrix& v = second_[i];
    m = config_.beta1 * m + (1.0 - config_.beta1) * p.grad;
    v = config_.beta2 * v + (1.0 - config_.beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= config_.learning_rate * (m.array() / correct1) /
                       ((v.array() / correct2).sqrt() + config_.epsilon);
    p.zero_grad();
  }
}

GradCheckResult finite_diff_check(const std::function<double(bool)>& loss,
                                  std::span<Parameter* const> params,
                                  double step, double floor) {
  for (Parameter* p : params) p->zero_grad();
  loss(true);
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const Parameter* p : params) analytic.push_back(p->grad);

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (Index i = 0; i < p.value.size(); ++i) {
      const double saved = p.value(i);
      p.value(i) = saved + step;
      const double up = loss(false);
      p.value(i) = saved - step;
      const double down = loss(false);
      p.value(i) = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[k](i);
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double rel = std::abs(a - numeric) / denom;
      ++result.checked;
      if (rel > result.max_relative_error || result.worst_index < 0) {
        result.max_relative_error = std::max(result.max_relative_error, rel);
        if (rel >= result.max_relative_error) {
          result.worst_parameter = p.name;
          result.worst_index = i;
          result.analytic = a;
          result.numeric = numeric;
        }
      }
    }
    p.zero_grad();
  }
  return result;
}

}  // namespace groundnav::nnet
