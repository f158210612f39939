#include "pdmp/core.hpp"

#include <utility>

namespace pdmp {

State::State(Vector position, Vector velocity) : x(std::move(position)), v(std::move(velocity)) {
  if (x.size() == 0 || x.size() != v.size()) {
    throw InvalidArgument("State: position and velocity must have the same positive length");
  }
}

double RunStats::thinning_acceptance() const {
  const auto proposals = n_events + n_rejections;
  return proposals == 0 ? 0.0 : static_cast<double>(n_events) / static_cast<double>(proposals);
}

double RunStats::mean_bound_excess() const {
  return n_bound_errors == 0 ? 0.0 : bound_error_excess_sum / static_cast<double>(n_bound_errors);
}

}  // namespace pdmp
