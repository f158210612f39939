#include <doctest.h>

#include <cmath>
#include <variant>

#include "pdmp/events.hpp"
#include "pdmp/models.hpp"
#include "pdmp/targets.hpp"
#include "support.hpp"

using namespace pdmp;

namespace {

double candidate(const Proposal& p) {
  REQUIRE(std::holds_alternative<Candidate>(p));
  return std::get<Candidate>(p).time;
}

// Flat potential: U = 0 so a bouncy particle has rate equal to its refresh
// rate everywhere.
TargetPotential flat(int d) {
  return TargetPotential("flat", d, [d](const Vector&) { return Vector(Vector::Zero(d)); },
                         [d](const Vector&, const Vector&) { return Vector(Vector::Zero(d)); });
}

}  // namespace

TEST_CASE("next_event hand inversions") {
  const Envelope env({0.0, 0.5, 1.0}, {2.0, 4.0}, EnvelopeKind::grid);
  CHECK(candidate(next_event(env, 1.5)) == doctest::Approx(0.625));
  CHECK(candidate(next_event(Envelope::constant(4.0, 10.0), 2.0)) == doctest::Approx(0.5));
  CHECK(std::holds_alternative<HorizonReached>(next_event(env, 3.0)));
  CHECK(std::holds_alternative<HorizonReached>(next_event(env, 5.0)));
  // A shrunk horizon turns a late candidate into a horizon hit.
  CHECK(std::holds_alternative<HorizonReached>(next_event(env, 1.5, 0.6)));
  CHECK(candidate(next_event(env, 1.5, 0.7)) == doctest::Approx(0.625));
  CHECK_THROWS_AS(next_event(env, 0.0), InvalidArgument);
}

TEST_CASE("next_event skips zero-level segments") {
  const Envelope env({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 0.0, 0.0}, EnvelopeKind::grid);
  CHECK(candidate(next_event(env, 0.25)) == doctest::Approx(1.25));
  CHECK(candidate(next_event(env, 1e-300)) >= 1.0);
  CHECK(std::holds_alternative<HorizonReached>(next_event(env, 1.0)));
  const Envelope zero({0.0, 1.0}, {0.0}, EnvelopeKind::grid);
  CHECK(std::holds_alternative<HorizonReached>(next_event(zero, 0.1)));
}

TEST_CASE("next_event matches a root-finding oracle on random envelopes") {
  RandomStream rng(99);
  for (int c = 0; c < 1000; ++c) {
    std::vector<double> grid = {0.0};
    std::vector<double> levels;
    for (int i = 0; i < 50; ++i) {
      grid.push_back(grid.back() + 0.01 + rng.uniform());
      levels.push_back(rng.uniform() < 0.1 ? 0.0 : 5.0 * rng.uniform());
    }
    const Envelope env(grid, levels, EnvelopeKind::grid);
    const double e = env.integral() * rng.uniform();
    const double tau = candidate(next_event(env, e));
    REQUIRE(std::abs(env.integral_to(tau) - e) < 1e-10 * std::max(1.0, e));
    REQUIRE(std::abs(env.integral_to(testing::root_find(env, e)) - e) < 1e-10 * std::max(1.0, e));
  }
}

TEST_CASE("thinning outcomes") {
  const auto pot = flat(2);
  const BouncyParticle bps(1.0);
  RateEvaluator eval(bps, pot, make_rate_bundle(bps, Strategy::Plain, 2));
  const State s(Vector::Zero(2), Vector::Ones(2));
  RandomStream rng(1);
  for (int i = 0; i < 100; ++i) {
    // lambda == Lambda: always accept.
    const auto r = thinning_step(eval, s, 0.3, Envelope::constant(1.0, 1.0), rng);
    REQUIRE(r.outcome == ThinningOutcome::accept);
    REQUIRE(r.ratio == 1.0);
    // lambda > Lambda: a bound error, never accepted.
    const auto e = thinning_step(eval, s, 0.3, Envelope::constant(0.5, 1.0), rng);
    REQUIRE(e.outcome == ThinningOutcome::bound_error);
    REQUIRE(e.ratio == 2.0);
  }
  // lambda == 0: always reject.
  const BouncyParticle no_refresh(0.0);
  RateEvaluator zero(no_refresh, pot, make_rate_bundle(no_refresh, Strategy::Plain, 2));
  for (int i = 0; i < 100; ++i) {
    const auto r = thinning_step(zero, s, 0.3, Envelope::constant(1.0, 1.0), rng);
    REQUIRE(r.outcome == ThinningOutcome::reject);
    REQUIRE(r.ratio == 0.0);
  }
  CHECK(thinning_step(eval, s, 0.3, Envelope::constant(0.0, 1.0), rng).outcome == ThinningOutcome::bound_error);
  CHECK_THROWS_AS(thinning_step(eval, s, 2.0, Envelope::constant(1.0, 1.0), rng), InvalidArgument);
}

TEST_CASE("thinning a homogeneous rate 1 under envelope 2 gives Exp(1) gaps") {
  const auto pot = flat(1);
  const BouncyParticle bps(1.0);
  RateEvaluator eval(bps, pot, make_rate_bundle(bps, Strategy::Plain, 1));
  const State s(Vector::Zero(1), Vector::Ones(1));
  const Envelope env = Envelope::constant(2.0, 1e9);
  RandomStream rng(5);
  std::vector<double> gaps;
  double last = 0.0, e = rng.exponential();
  while (gaps.size() < 100000) {
    const double tau = candidate(next_event(env, e));
    if (thinning_step(eval, s, tau, env, rng).outcome == ThinningOutcome::accept) {
      gaps.push_back(tau - last);
      last = tau;
    }
    e += rng.exponential();
  }
  // 1% critical value of the one-sample KS statistic: 1.63 / sqrt(n).
  CHECK(testing::ks_one_sample(gaps, [](double t) { return 1 - std::exp(-t); }) < 1.63 / std::sqrt(1e5));
}

TEST_CASE("accumulating budget after a rejection matches a fresh clock") {
  // Constant envelope c: continuing with e + Exp(1) after a rejection at tau
  // gives the same next-candidate law as restarting an Exp(c) clock at tau.
  const double c = 1.7;
  const Envelope env = Envelope::constant(c, 1e9);
  RandomStream rng(12);
  std::vector<double> accumulated, fresh;
  for (int i = 0; i < 10000; ++i) {
    const double e1 = rng.exponential();
    const double tau = candidate(next_event(env, e1));
    accumulated.push_back(candidate(next_event(env, e1 + rng.exponential())) - tau);
    fresh.push_back(rng.exponential() / c);
  }
  CHECK(testing::ks_two_sample(accumulated, fresh) < 0.02);
}

TEST_CASE("first-event law of lambda(t) = a + b t under a grid envelope") {
  // BPS in 1-d on U = b x^2 / 2 from x = 0, v = 1 with refresh a has
  // lambda(t) = a + b t; inversion gives t = (-a + sqrt(a^2 + 2 b E)) / b.
  const double a = 0.5, b = 2.0;
  const auto pot = gaussian_diag({b});
  const BouncyParticle bps(a);
  RateEvaluator eval(bps, pot, make_rate_bundle(bps, Strategy::Plain, 1));
  const State s(Vector::Zero(1), Vector::Ones(1));
  const Envelope env = testing::grid_envelope(eval, s, 5.0, 10);
  RandomStream rng(77);
  std::vector<double> thinned, direct;
  while (thinned.size() < 10000) {
    double e = rng.exponential();
    for (;;) {
      const Proposal p = next_event(env, e);
      if (!std::holds_alternative<Candidate>(p)) break;  // beyond t = 5; probability ~ e^-27
      const double tau = std::get<Candidate>(p).time;
      if (thinning_step(eval, s, tau, env, rng).outcome == ThinningOutcome::accept) {
        thinned.push_back(tau);
        break;
      }
      e += rng.exponential();
    }
    const double E = rng.exponential();
    direct.push_back((-a + std::sqrt(a * a + 2 * b * E)) / b);
  }
  CHECK(testing::ks_two_sample(thinned, direct) < 0.02);
}
