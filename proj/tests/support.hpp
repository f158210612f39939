#ifndef PDMP_TESTS_SUPPORT_HPP
#define PDMP_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/envelope.hpp"
#include "pdmp/model.hpp"
#include "pdmp/random.hpp"
#include "pdmp/rate.hpp"

namespace testing {

// Kolmogorov-Smirnov distance of a sample against a continuous CDF.
inline double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Central finite-difference gradient of a scalar function.
inline pdmp::Vector fd_gradient(const std::function<double(const pdmp::Vector&)>& f, const pdmp::Vector& x,
                                double h = 1e-6) {
  pdmp::Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    pdmp::Vector p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

inline double rel_err(const pdmp::Vector& a, const pdmp::Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Grid envelope for the rate seen from s on [0, t_max].
inline pdmp::Envelope grid_envelope(pdmp::RateEvaluator& eval, const pdmp::State& s, double t_max, int n) {
  const auto grid = pdmp::uniform_grid(t_max, n);
  pdmp::ChannelGrid nodes;
  eval.channels_on_grid(s, grid, nodes);
  return pdmp::upper_bound_grid(nodes, grid, eval.bundle().strategy, eval.bundle().refresh_rate);
}

// Number of dense checkpoints t_j = j t_max / (m - 1) where the true rate
// exceeds the envelope (relative slack 1e-12).
inline int dominance_violations(pdmp::RateEvaluator& eval, const pdmp::State& s, const pdmp::Envelope& env,
                                int m = 10000) {
  int bad = 0;
  for (int j = 0; j < m; ++j) {
    const double t = env.t_max() * static_cast<double>(j) / static_cast<double>(m - 1);
    const double lambda = eval.rate(s, t).rate;
    const double bound = env.level_at(t);
    if (lambda > bound + 1e-12 * std::max(1.0, std::abs(bound))) ++bad;
  }
  return bad;
}

// Time tau with integral_0^tau env = budget, by bisection on the cumulative
// integral.
inline double root_find(const pdmp::Envelope& env, double budget) {
  double lo = 0.0, hi = env.t_max();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (env.integral_to(mid) < budget ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Random skeleton whose event states are arbitrary (the moment integrals do
// not need a continuous path).
inline pdmp::Skeleton random_skeleton(pdmp::RandomStream& rng, int d, int events) {
  pdmp::Skeleton sk;
  sk.initial = pdmp::State(rng.normal_vector(d), rng.normal_vector(d));
  double t = 0.0;
  for (int i = 0; i < events; ++i) {
    t += 0.05 + rng.exponential();
    sk.events.push_back({t, rng.normal_vector(d), rng.normal_vector(d)});
  }
  sk.final_time = t + 0.05 + rng.exponential();
  sk.final_state = sk.initial;
  return sk;
}

// Midpoint Riemann sums of x and x^2 with step 1e-4 of each segment length,
// divided by the total time.
inline std::pair<pdmp::Vector, pdmp::Vector> riemann_moments(const pdmp::Skeleton& sk, pdmp::FlowKind kind) {
  const int d = sk.dim();
  pdmp::Vector m = pdmp::Vector::Zero(d), m2 = pdmp::Vector::Zero(d);
  auto segment = [&](const pdmp::State& s, double dt) {
    const int n = 10000;
    const double h = dt / n;
    for (int k = 0; k < n; ++k) {
      const pdmp::Vector x = pdmp::flow(kind, s, (k + 0.5) * h).x;
      m += h * x;
      m2 += h * x.cwiseProduct(x);
    }
  };
  pdmp::State s = sk.initial;
  double t = 0.0;
  for (const auto& e : sk.events) {
    segment(s, e.t - t);
    s = pdmp::State(e.x, e.v);
    t = e.t;
  }
  segment(s, sk.final_time - t);
  return {m / sk.final_time, m2 / sk.final_time};
}

}  // namespace testing

#endif  // PDMP_TESTS_SUPPORT_HPP
