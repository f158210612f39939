#ifndef PDMP_POTENTIAL_HPP
#define PDMP_POTENTIAL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "pdmp/core.hpp"

namespace pdmp {

/// Potential U(x) = -log pi(x) + const, accessed through its gradient and,
/// optionally, Hessian-vector products and the value itself.
///
/// Copies share the evaluation counters; the counters are atomic so a single
/// potential may be evaluated from several chains at once.
class TargetPotential {
 public:
  using GradFn = std::function<Vector(const Vector&)>;
  using HvpFn = std::function<Vector(const Vector& x, const Vector& w)>;
  using ValueFn = std::function<double(const Vector&)>;
  /// Column-wise gradients of a batch of points, plus H(x_j) w_j when `hw`
  /// is non-null.
  using BatchFn = std::function<void(const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw)>;

  TargetPotential(std::string name, int dim, GradFn grad, HvpFn hvp = {}, ValueFn value = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return dim_; }

  [[nodiscard]] Vector grad(const Vector& x) const;
  [[nodiscard]] bool has_hvp() const { return static_cast<bool>(hvp_); }
  /// Hessian of U at x applied to w. Throws MissingHvp when not supplied.
  [[nodiscard]] Vector hvp(const Vector& x, const Vector& w) const;
  [[nodiscard]] bool has_value() const { return static_cast<bool>(value_); }
  [[nodiscard]] double value(const Vector& x) const;

  /// Batched gradients (columns of x) and, when `hw` is non-null,
  /// Hessian-vector products with the columns of w. Uses the batch callback
  /// when one is installed, otherwise loops over columns. Counts one gradient
  /// (and one HVP) per column.
  void grad_hvp_batch(const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) const;
  /// Copy with a batch callback installed; shares counters with this one.
  [[nodiscard]] TargetPotential with_batch(BatchFn batch) const;

  [[nodiscard]] std::uint64_t grad_eval_count() const;
  [[nodiscard]] std::uint64_t hvp_eval_count() const;

  /// Same potential without the Hessian-vector product (forces the
  /// finite-difference derivative path). Shares counters with this one.
  [[nodiscard]] TargetPotential without_hvp() const;

 private:
  struct Counters {
    std::atomic<std::uint64_t> grad{0};
    std::atomic<std::uint64_t> hvp{0};
  };

  std::string name_;
  int dim_;
  GradFn grad_;
  HvpFn hvp_;
  ValueFn value_;
  BatchFn batch_;
  std::shared_ptr<Counters> counters_;
};

}  // namespace pdmp

#endif  // PDMP_POTENTIAL_HPP
