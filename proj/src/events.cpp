#include "pdmp/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdmp {

Proposal next_event(const Envelope& env, double budget, double horizon) {
  if (!(budget > 0.0)) throw InvalidArgument("next_event: budget must be > 0");
  const auto cumulative = env.cumulative();
  if (budget >= env.integral()) return HorizonReached{};

  // First node whose cumulative mass exceeds the budget; zero-level segments
  // have equal consecutive cumulatives and are never selected.
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), budget);
  const auto k = static_cast<std::size_t>(it - cumulative.begin()) - 1;
  const auto grid = env.grid();
  const double level = env.levels()[k];
  const double tau = std::min(grid[k] + (budget - cumulative[k]) / level, grid[k + 1]);
  if (tau > std::min(horizon, env.t_max())) return HorizonReached{};
  return Candidate{tau};
}

ThinningResult thinning_step(RateEvaluator& rate, const State& s, double tau, const Envelope& env,
                             RandomStream& rng) {
  if (!(tau >= 0.0) || tau > env.t_max()) throw InvalidArgument("thinning_step: tau outside [0, t_max]");
  ThinningResult result;
  result.point = rate.rate(s, tau);
  const double bound = env.level_at(tau);
  const double lambda = result.point.rate;
  if (!std::isfinite(lambda)) throw NonFiniteInput("thinning_step: non-finite rate");
  if (bound > 0.0) {
    result.ratio = lambda / bound;
  } else {
    result.ratio = lambda > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  const double u = rng.uniform();
  if (result.ratio > 1.0) {
    result.outcome = ThinningOutcome::bound_error;
  } else {
    result.outcome = u <= result.ratio ? ThinningOutcome::accept : ThinningOutcome::reject;
  }
  return result;
}

}  // namespace pdmp
