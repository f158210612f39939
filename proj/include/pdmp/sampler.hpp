#ifndef PDMP_SAMPLER_HPP
#define PDMP_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "pdmp/core.hpp"
#include "pdmp/envelope.hpp"
#include "pdmp/model.hpp"
#include "pdmp/potential.hpp"
#include "pdmp/rate.hpp"

namespace pdmp {

struct SamplerConfig {
  std::uint64_t n_events = 1000;  // K
  double t_max0 = 1.0;
  int n_segments = 10;  // 0 selects the constant Brent bound
  double alpha_plus = 1.01;
  double alpha_minus = 1.04;
  bool adapt = true;
  Strategy strategy = Strategy::Plain;
  std::uint64_t seed = 1;
  double t_max_floor = 1e-6;
  double t_max_cap = 1e4;
  /// NonConvergence is raised after this many rate evaluations without an
  /// accepted event.
  std::uint64_t max_evals_without_event = 1'000'000'000ULL;
  bool keep_skeleton = true;
  BrentOptions brent;
  DerivativeOptions derivatives;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  /// Strategy that is actually used (Brent whenever n_segments == 0).
  [[nodiscard]] Strategy effective_strategy() const;
};

/// Loop events reported to an optional observer (tests, tracing).
struct SamplerEvent {
  enum class Kind { envelope_built, accept, reject, horizon, bound_error };
  Kind kind;
  double t_max = 0.0;  // envelope horizon, or the horizon in force when the event happened
  double time = 0.0;   // process time at the envelope origin
  double ratio = 0.0;  // thinning ratio (accept/reject/bound_error)
};

using SamplerObserver = std::function<void(const SamplerEvent&)>;

struct RunResult {
  Skeleton skeleton;
  RunStats stats;
};

/// Adaptive-horizon thinning sampler. Starts at x0 (origin when empty) with a
/// velocity from model.initial_velocity. Stops after config.n_events
/// accepted events.
[[nodiscard]] RunResult run(const PdmpModel& model, const TargetPotential& potential, const SamplerConfig& config,
                            std::optional<Vector> x0 = std::nullopt, const SamplerObserver& observer = {});

/// Same loop from an explicit initial state.
[[nodiscard]] RunResult run_from(const PdmpModel& model, const TargetPotential& potential,
                                 const SamplerConfig& config, State initial, const SamplerObserver& observer = {});

/// Automatic Zig-Zag baseline: constant Brent bound, fixed horizon unless
/// config.adapt. Requires config.n_segments == 0.
[[nodiscard]] RunResult run_autozz_baseline(const TargetPotential& potential, const SamplerConfig& config,
                                            std::optional<Vector> x0 = std::nullopt);

}  // namespace pdmp

#endif  // PDMP_SAMPLER_HPP
