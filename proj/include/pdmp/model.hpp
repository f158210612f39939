#ifndef PDMP_MODEL_HPP
#define PDMP_MODEL_HPP

#include <string_view>

#include "pdmp/core.hpp"
#include "pdmp/random.hpp"

namespace pdmp {

enum class FlowKind {
  linear,    // x + t v, v constant
  circular,  // x cos t + v sin t, -x sin t + v cos t
  custom,    // model-defined; no closed-form path integrals
};

enum class RateForm {
  zigzag,  // sum_i (grad_i U(x) v_i)_+
  bounce,  // <grad U(x), v>_+ + refresh
};

enum class VelocityFamily { hypercube, gaussian, sphere };

/// The (flow, rate, jump kernel) triple that defines a PDMP sampler.
///
/// Rates are always built from grad U evaluated along the flow; `rate_form`
/// selects how the gradient is combined with the velocity. Models are
/// immutable and may be shared between chains.
class PdmpModel {
 public:
  virtual ~PdmpModel() = default;

  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual FlowKind flow_kind() const = 0;
  [[nodiscard]] virtual RateForm rate_form() const = 0;
  [[nodiscard]] virtual VelocityFamily velocity_family() const = 0;
  [[nodiscard]] virtual double refresh_rate() const { return 0.0; }

  /// Flow map. dt must be non-negative. Every flow must satisfy dx/dt = v;
  /// rate derivatives along the flow rely on it.
  [[nodiscard]] virtual State advance(const State& s, double dt) const;
  /// Time derivative of the velocity along the flow at s.
  [[nodiscard]] virtual Vector velocity_drift(const State& s) const;

  /// New velocity at an event located at s, given grad U(s.x).
  [[nodiscard]] virtual Vector jump(const State& s, const Vector& grad, RandomStream& rng) const = 0;
  [[nodiscard]] virtual Vector initial_velocity(int dim, RandomStream& rng) const = 0;

  /// True event rate at s given grad U(s.x).
  [[nodiscard]] double rate(const State& s, const Vector& grad) const;

  /// Throws InvalidArgument if s violates the model's velocity constraint.
  void validate(const State& s) const;
};

/// Flow shared by the closed-form models, usable outside a model instance.
[[nodiscard]] State flow(FlowKind kind, const State& s, double dt);

}  // namespace pdmp

#endif  // PDMP_MODEL_HPP
