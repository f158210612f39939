#include "pdmp/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "pdmp/events.hpp"
#include "pdmp/models.hpp"

namespace pdmp {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& rule, double got) {
  std::ostringstream msg;
  msg << field << " " << rule << " (got " << got << ")";
  throw InvalidArgument(msg.str());
}

class Sampler {
 public:
  Sampler(const PdmpModel& model, const TargetPotential& potential, const SamplerConfig& config,
          RandomStream& rng, const SamplerObserver& observer)
      : model_(model),
        config_(config),
        strategy_(config.effective_strategy()),
        rate_(model, potential, make_rate_bundle(model, strategy_, potential.dim()), config.derivatives),
        rng_(rng),
        observer_(observer) {}

  RunResult run(State initial) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    out.skeleton.initial = initial;
    if (config_.keep_skeleton) out.skeleton.events.reserve(config_.n_events);
    s_ = std::move(initial);
    tmax_ = config_.t_max0;

    build();
    double budget = rng_.exponential();
    while (stats_.n_events < config_.n_events) {
      if (evals_since_event_ > config_.max_evals_without_event) {
        throw NonConvergence("no event accepted within " + std::to_string(config_.max_evals_without_event) +
                             " rate evaluations");
      }
      const Proposal proposal = next_event(env_, budget, tmax_);
      if (std::holds_alternative<HorizonReached>(proposal)) {
        notify(SamplerEvent::Kind::horizon, 0.0);
        s_ = model_.advance(s_, tmax_);
        move_clock(tmax_);
        ++stats_.n_horizon_hits;
        tmax_ = config_.adapt ? std::min(config_.t_max_cap, tmax_ * config_.alpha_plus) : config_.t_max0;
        build();
        budget = rng_.exponential();
        continue;
      }

      const double tau = std::get<Candidate>(proposal).time;
      ThinningResult step = thinning_step(rate_, s_, tau, env_, rng_);
      ++stats_.n_thinning_evals;
      ++evals_since_event_;
      switch (step.outcome) {
        case ThinningOutcome::bound_error:
          notify(SamplerEvent::Kind::bound_error, step.ratio);
          ++stats_.n_bound_errors;
          stats_.bound_error_excess_sum += step.ratio - 1.0;
          tmax_ = std::max(config_.t_max_floor, 0.5 * tmax_);
          build();
          budget = rng_.exponential();
          break;
        case ThinningOutcome::accept: {
          notify(SamplerEvent::Kind::accept, step.ratio);
          State& at = step.point.state;
          at.v = model_.jump(at, step.point.grad, rng_);
          s_ = std::move(at);
          move_clock(tau);
          ++stats_.n_events;
          evals_since_event_ = 0;
          if (config_.keep_skeleton) out.skeleton.events.push_back({time_, s_.x, s_.v});
          if (!config_.adapt) tmax_ = config_.t_max0;
          build();
          budget = rng_.exponential();
          break;
        }
        case ThinningOutcome::reject:
          notify(SamplerEvent::Kind::reject, step.ratio);
          ++stats_.n_rejections;
          budget += rng_.exponential();
          if (config_.adapt) tmax_ = std::max(config_.t_max_floor, tmax_ / config_.alpha_minus);
          break;
      }
    }

    out.skeleton.final_time = time_;
    out.skeleton.final_state = s_;
    stats_.n_grad_evals = rate_.grad_calls();
    stats_.n_hvp_evals = rate_.hvp_calls();
    stats_.final_tmax = tmax_;
    stats_.mean_tmax = time_ > 0.0 ? weighted_tmax_ / time_ : tmax_;
    stats_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.stats = stats_;
    return out;
  }

 private:
  void build() {
    if (strategy_ == Strategy::Brent) {
      auto bound = upper_bound_brent([this](double t) { return rate_.rate(s_, t).rate; }, tmax_, config_.brent);
      env_ = std::move(bound.envelope);
      stats_.n_opt_evals += static_cast<std::uint64_t>(bound.evaluations);
      evals_since_event_ += static_cast<std::uint64_t>(bound.evaluations);
    } else {
      const std::vector<double> grid = uniform_grid(tmax_, config_.n_segments);
      rate_.channels_on_grid(s_, grid, nodes_);
      env_ = upper_bound_grid(nodes_, grid, strategy_, rate_.bundle().refresh_rate);
      stats_.n_opt_evals += grid.size();
      evals_since_event_ += grid.size();
    }
    notify(SamplerEvent::Kind::envelope_built, 0.0);
  }

  void move_clock(double dt) {
    time_ += dt;
    weighted_tmax_ += dt * tmax_;
  }

  void notify(SamplerEvent::Kind kind, double ratio) const {
    if (observer_) observer_(SamplerEvent{kind, tmax_, time_, ratio});
  }

  const PdmpModel& model_;
  const SamplerConfig& config_;
  Strategy strategy_;
  RateEvaluator rate_;
  RandomStream& rng_;
  const SamplerObserver& observer_;

  State s_;
  double time_ = 0.0;
  double tmax_ = 0.0;
  double weighted_tmax_ = 0.0;
  std::uint64_t evals_since_event_ = 0;
  Envelope env_;
  ChannelGrid nodes_;
  RunStats stats_;
};

RunResult run_with(const PdmpModel& model, const TargetPotential& potential, const SamplerConfig& config,
                   State initial, RandomStream& rng, const SamplerObserver& observer) {
  config.validate();
  if (initial.dim() != potential.dim()) {
    throw InvalidArgument("initial state dimension " + std::to_string(initial.dim()) +
                          " does not match potential dimension " + std::to_string(potential.dim()));
  }
  model.validate(initial);
  Sampler sampler(model, potential, config, rng, observer);
  return sampler.run(std::move(initial));
}

}  // namespace

void SamplerConfig::validate() const {
  if (n_events < 1) bad_field("n_events", "must be >= 1", static_cast<double>(n_events));
  if (!(t_max0 > 0.0) || !std::isfinite(t_max0)) bad_field("t_max0", "must be finite and > 0", t_max0);
  if (n_segments < 0) bad_field("n_segments", "must be >= 0", n_segments);
  if (!(alpha_plus >= 1.0) || !std::isfinite(alpha_plus)) bad_field("alpha_plus", "must be >= 1", alpha_plus);
  if (!(alpha_minus >= 1.0) || !std::isfinite(alpha_minus)) bad_field("alpha_minus", "must be >= 1", alpha_minus);
  if (!(t_max_floor > 0.0)) bad_field("t_max_floor", "must be > 0", t_max_floor);
  if (!(t_max_cap >= t_max_floor) || !std::isfinite(t_max_cap)) {
    bad_field("t_max_cap", "must be finite and >= t_max_floor", t_max_cap);
  }
  if (t_max0 < t_max_floor || t_max0 > t_max_cap) bad_field("t_max0", "must lie in [t_max_floor, t_max_cap]", t_max0);
  if (!(brent.rel_tol > 0.0)) bad_field("brent.rel_tol", "must be > 0", brent.rel_tol);
  if (brent.max_iter < 0) bad_field("brent.max_iter", "must be >= 0", brent.max_iter);
}

Strategy SamplerConfig::effective_strategy() const {
  return n_segments == 0 ? Strategy::Brent : strategy;
}

RunResult run(const PdmpModel& model, const TargetPotential& potential, const SamplerConfig& config,
              std::optional<Vector> x0, const SamplerObserver& observer) {
  config.validate();
  RandomStream rng(config.seed);
  Vector position = x0 ? *x0 : Vector::Zero(potential.dim());
  Vector velocity = model.initial_velocity(static_cast<int>(position.size()), rng);
  return run_with(model, potential, config, State(std::move(position), std::move(velocity)), rng, observer);
}

RunResult run_from(const PdmpModel& model, const TargetPotential& potential, const SamplerConfig& config,
                   State initial, const SamplerObserver& observer) {
  RandomStream rng(config.seed);
  return run_with(model, potential, config, std::move(initial), rng, observer);
}

RunResult run_autozz_baseline(const TargetPotential& potential, const SamplerConfig& config,
                              std::optional<Vector> x0) {
  if (config.n_segments != 0) {
    throw InvalidArgument("run_autozz_baseline: n_segments must be 0 (constant Brent bound)");
  }
  const ZigZag model;
  return run(model, potential, config, std::move(x0));
}

}  // namespace pdmp
