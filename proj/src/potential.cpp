#include "pdmp/potential.hpp"

#include <utility>

namespace pdmp {

TargetPotential::TargetPotential(std::string name, int dim, GradFn grad, HvpFn hvp, ValueFn value)
    : name_(std::move(name)),
      dim_(dim),
      grad_(std::move(grad)),
      hvp_(std::move(hvp)),
      value_(std::move(value)),
      counters_(std::make_shared<Counters>()) {
  if (dim_ < 1) throw InvalidArgument("TargetPotential: dim must be >= 1");
  if (!grad_) throw InvalidArgument("TargetPotential: gradient is required");
}

Vector TargetPotential::grad(const Vector& x) const {
  counters_->grad.fetch_add(1, std::memory_order_relaxed);
  return grad_(x);
}

Vector TargetPotential::hvp(const Vector& x, const Vector& w) const {
  if (!hvp_) throw MissingHvp("potential '" + name_ + "' has no Hessian-vector product");
  counters_->hvp.fetch_add(1, std::memory_order_relaxed);
  return hvp_(x, w);
}

double TargetPotential::value(const Vector& x) const {
  if (!value_) throw InvalidArgument("potential '" + name_ + "' has no value function");
  return value_(x);
}

void TargetPotential::grad_hvp_batch(const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) const {
  if (hw && !hvp_) throw MissingHvp("potential '" + name_ + "' has no Hessian-vector product");
  const auto n = static_cast<std::uint64_t>(x.cols());
  counters_->grad.fetch_add(n, std::memory_order_relaxed);
  if (hw) counters_->hvp.fetch_add(n, std::memory_order_relaxed);
  if (batch_) {
    batch_(x, w, g, hw);
    return;
  }
  g.resize(x.rows(), x.cols());
  if (hw) hw->resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector xj = x.col(j);
    g.col(j) = grad_(xj);
    if (hw) hw->col(j) = hvp_(xj, w.col(j));
  }
}

TargetPotential TargetPotential::with_batch(BatchFn batch) const {
  TargetPotential copy = *this;
  copy.batch_ = std::move(batch);
  return copy;
}

std::uint64_t TargetPotential::grad_eval_count() const { return counters_->grad.load(std::memory_order_relaxed); }

std::uint64_t TargetPotential::hvp_eval_count() const { return counters_->hvp.load(std::memory_order_relaxed); }

TargetPotential TargetPotential::without_hvp() const {
  TargetPotential copy = *this;
  copy.hvp_ = {};
  // The batch callback stays: it is only asked for HVPs when hvp_ is set.
  return copy;
}

}  // namespace pdmp
