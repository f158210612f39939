#ifndef PDMP_PATH_STATS_HPP
#define PDMP_PATH_STATS_HPP

#include <span>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/model.hpp"

namespace pdmp {

// Continuous-time averages over [0, final_time] of a skeleton's path.
// Closed-form segment integrals exist for linear and circular flows; other
// flows raise UnsupportedFlow.

[[nodiscard]] Vector path_mean(const Skeleton& skeleton, FlowKind flow);
[[nodiscard]] Vector path_mean(const Skeleton& skeleton, const PdmpModel& model);

/// Per-coordinate time average of x_i(t)^2.
[[nodiscard]] Vector path_second_moment(const Skeleton& skeleton, FlowKind flow);
[[nodiscard]] Vector path_second_moment(const Skeleton& skeleton, const PdmpModel& model);

/// Positions of the path at the given times (any order), each in
/// [0, final_time]. Throws OutOfRange otherwise.
[[nodiscard]] std::vector<Vector> sample_at_times(const Skeleton& skeleton, const PdmpModel& model,
                                                  std::span<const double> times);

/// Segment integrals of x(t) and x(t)^2 over [0, dt] for one segment.
[[nodiscard]] Vector segment_integral(const Vector& x, const Vector& v, double dt, FlowKind flow);
[[nodiscard]] Vector segment_square_integral(const Vector& x, const Vector& v, double dt, FlowKind flow);

}  // namespace pdmp

#endif  // PDMP_PATH_STATS_HPP
