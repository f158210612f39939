#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "pdmp/core.hpp"
#include "pdmp/models.hpp"
#include "pdmp/random.hpp"

using namespace pdmp;

TEST_CASE("State requires matching positive dimensions") {
  CHECK_THROWS_AS(State(Vector(2), Vector(3)), InvalidArgument);
  CHECK_THROWS_AS(State(Vector(0), Vector(0)), InvalidArgument);
  const State s(Vector::Zero(3), Vector::Ones(3));
  CHECK(s.dim() == 3);
}

TEST_CASE("RunStats derived quantities") {
  RunStats st;
  CHECK(st.thinning_acceptance() == 0.0);
  CHECK(st.mean_bound_excess() == 0.0);
  st.n_events = 3;
  st.n_rejections = 1;
  st.n_opt_evals = 10;
  st.n_thinning_evals = 4;
  st.n_bound_errors = 2;
  st.bound_error_excess_sum = 0.5;
  CHECK(st.thinning_acceptance() == doctest::Approx(0.75));
  CHECK(st.total_rate_evals() == 14);
  CHECK(st.mean_bound_excess() == doctest::Approx(0.25));
}

TEST_CASE("RandomStream is reproducible and splittable") {
  RandomStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs |= x != c.uniform();
  }
  CHECK(differs);

  const RandomStream root(7);
  RandomStream s1 = root.split(1), s1b = root.split(1), s2 = root.split(2);
  CHECK(s1.seed() == derive_seed(7, 1));
  CHECK(s1.uniform() == s1b.uniform());
  CHECK(s1.seed() != s2.seed());
}

TEST_CASE("RandomStream draws have the documented laws") {
  RandomStream rng(2024);
  const int n = 200000;
  double sum_u = 0, sum_e = 0, sum_n = 0, sum_n2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum_u += u;
    sum_e += rng.exponential();
    const double z = rng.normal();
    sum_n += z;
    sum_n2 += z * z;
  }
  CHECK(sum_u / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum_e / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(sum_n / n) < 0.01);
  CHECK(sum_n2 / n == doctest::Approx(1.0).epsilon(0.01));

  for (int i = 0; i < 100; ++i) {
    CHECK(rng.sphere(5).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const Vector s = rng.sign_vector(4);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(s[j]) == 1.0);
  }

  const std::vector<double> w = {1.0, 0.0, 3.0};
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 40000; ++i) ++counts[rng.categorical(w)];
  CHECK(counts[1] == 0);
  CHECK(counts[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.05));
  CHECK_THROWS_AS(rng.categorical(std::vector<double>{0.0, 0.0}), InvalidArgument);
}

TEST_CASE("advance examples") {
  const State lin(Vector::Zero(2), (Vector(2) << 1, -1).finished());
  const State moved = flow(FlowKind::linear, lin, 2.0);
  CHECK(moved.x[0] == 2.0);
  CHECK(moved.x[1] == -2.0);
  CHECK(moved.v == lin.v);

  const State b((Vector(2) << 1, 0).finished(), (Vector(2) << 0, 1).finished());
  const State q = flow(FlowKind::circular, b, std::numbers::pi / 2);
  CHECK(q.x[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q.x[1] == doctest::Approx(1.0));
  CHECK(q.v[0] == doctest::Approx(-1.0));
  CHECK(q.v[1] == doctest::Approx(0.0).epsilon(1e-15));

  for (auto kind : {FlowKind::linear, FlowKind::circular}) {
    const State same = flow(kind, b, 0.0);
    CHECK(same.x == b.x);
    CHECK(same.v == b.v);
  }
  CHECK_THROWS_AS(flow(FlowKind::linear, b, -1.0), InvalidArgument);
  CHECK_THROWS_AS(flow(FlowKind::custom, b, 1.0), UnsupportedFlow);
}

TEST_CASE("flows are semigroups; the circular flow preserves |x|^2 + |v|^2") {
  RandomStream rng(11);
  for (auto kind : {FlowKind::linear, FlowKind::circular}) {
    for (int i = 0; i < 1000; ++i) {
      const State s(rng.normal_vector(4), rng.normal_vector(4));
      const double a = 3.0 * rng.uniform();
      const double b = 3.0 * rng.uniform();
      const State two = flow(kind, flow(kind, s, a), b);
      const State one = flow(kind, s, a + b);
      REQUIRE((two.x - one.x).cwiseAbs().maxCoeff() < 1e-9);
      REQUIRE((two.v - one.v).cwiseAbs().maxCoeff() < 1e-9);
      if (kind == FlowKind::circular) {
        REQUIRE(std::abs(one.x.squaredNorm() + one.v.squaredNorm() - s.x.squaredNorm() - s.v.squaredNorm()) <
                1e-9 * (1.0 + s.x.squaredNorm() + s.v.squaredNorm()));
      }
    }
  }
}

TEST_CASE("models validate their velocity family") {
  const ZigZag zz;
  CHECK_NOTHROW(zz.validate(State(Vector::Zero(2), Vector::Ones(2))));
  CHECK_THROWS_AS(zz.validate(State(Vector::Zero(2), Vector::Constant(2, 0.5))), InvalidArgument);
  const ForwardEventChain fec{KernelSpec{}};
  CHECK_THROWS_AS(fec.validate(State(Vector::Zero(2), Vector::Ones(2))), InvalidArgument);
  CHECK_NOTHROW(fec.validate(State(Vector::Zero(2), Vector::Ones(2).normalized())));
  const BouncyParticle bps(1.0);
  CHECK_NOTHROW(bps.validate(State(Vector::Zero(2), Vector::Constant(2, 3.0))));
}
