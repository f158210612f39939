#ifndef PDMP_EVENTS_HPP
#define PDMP_EVENTS_HPP

#include <limits>
#include <variant>

#include "pdmp/envelope.hpp"
#include "pdmp/random.hpp"
#include "pdmp/rate.hpp"

namespace pdmp {

struct Candidate {
  double time = 0.0;
};
struct HorizonReached {};

using Proposal = std::variant<Candidate, HorizonReached>;

/// Time tau with integral_0^tau envelope = budget, or HorizonReached when the
/// budget exceeds the envelope mass below `horizon` (default: the envelope's
/// own t_max). Zero-level segments consume no budget. budget must be > 0.
[[nodiscard]] Proposal next_event(const Envelope& env, double budget,
                                  double horizon = std::numeric_limits<double>::infinity());

enum class ThinningOutcome { accept, reject, bound_error };

struct ThinningResult {
  ThinningOutcome outcome = ThinningOutcome::reject;
  double ratio = 0.0;  // lambda(tau) / envelope(tau)
  RatePoint point;     // state and gradient at tau
};

/// Accept/reject of a candidate at tau: accept iff U(0,1) <= ratio. A ratio
/// above 1 is reported as bound_error and never accepted. One rate
/// evaluation.
[[nodiscard]] ThinningResult thinning_step(RateEvaluator& rate, const State& s, double tau, const Envelope& env,
                                           RandomStream& rng);

}  // namespace pdmp

#endif  // PDMP_EVENTS_HPP
