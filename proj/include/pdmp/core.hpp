#ifndef PDMP_CORE_HPP
#define PDMP_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pdmp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct NonFiniteInput : Error {
  using Error::Error;
};
struct MissingHvp : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct DegenerateGradient : Error {
  using Error::Error;
};
struct UnsupportedFlow : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};

/// Position and velocity of the process. The velocity constraint (hypercube,
/// sphere, unconstrained) is owned by the model, not by this type.
struct State {
  Vector x;
  Vector v;

  State() = default;
  State(Vector position, Vector velocity);

  [[nodiscard]] int dim() const { return static_cast<int>(x.size()); }
};

/// One skeleton point: event time and the state right after the velocity jump.
struct SkeletonPoint {
  double t = 0.0;
  Vector x;
  Vector v;
};

/// Event skeleton of a trajectory. The path between points is the model flow;
/// `initial` is the state at time 0 and is not an event.
struct Skeleton {
  State initial;
  std::vector<SkeletonPoint> events;
  double final_time = 0.0;
  State final_state;

  [[nodiscard]] int dim() const { return initial.dim(); }
  [[nodiscard]] std::size_t size() const { return events.size(); }
};

struct RunStats {
  std::uint64_t n_events = 0;          // accepted skeleton points
  std::uint64_t n_opt_evals = 0;       // rate evaluations spent building envelopes
  std::uint64_t n_thinning_evals = 0;  // rate evaluations spent in accept/reject
  std::uint64_t n_rejections = 0;
  std::uint64_t n_horizon_hits = 0;
  std::uint64_t n_bound_errors = 0;
  double bound_error_excess_sum = 0.0;  // sum of (ratio - 1) over bound errors
  std::uint64_t n_grad_evals = 0;       // potential gradient calls, all purposes
  std::uint64_t n_hvp_evals = 0;
  double wall_time = 0.0;  // seconds
  double final_tmax = 0.0;
  double mean_tmax = 0.0;  // weighted by process time spent under each horizon

  [[nodiscard]] std::uint64_t total_rate_evals() const { return n_opt_evals + n_thinning_evals; }

  /// Fraction of thinning proposals accepted (bound errors excluded).
  [[nodiscard]] double thinning_acceptance() const;

  /// Mean of (ratio - 1) over bound errors, 0 when there were none.
  [[nodiscard]] double mean_bound_excess() const;
};

}  // namespace pdmp

#endif  // PDMP_CORE_HPP
