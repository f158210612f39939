#include "pdmp/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace pdmp {

Envelope::Envelope(std::vector<double> grid, std::vector<double> levels, EnvelopeKind kind)
    : grid_(std::move(grid)), levels_(std::move(levels)), kind_(kind) {
  if (grid_.size() < 2 || levels_.size() + 1 != grid_.size()) {
    throw InvalidArgument("Envelope: need N >= 1 levels and N + 1 grid nodes");
  }
  if (grid_.front() != 0.0) throw InvalidArgument("Envelope: grid must start at 0");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (!(grid_[i + 1] > grid_[i]) || !std::isfinite(grid_[i + 1])) {
      throw InvalidArgument("Envelope: grid must be finite and strictly increasing");
    }
  }
  if (kind_ == EnvelopeKind::constant && levels_.size() != 1) {
    throw InvalidArgument("Envelope: a constant envelope has exactly one segment");
  }
  cumulative_.resize(grid_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] >= 0.0) || !std::isfinite(levels_[i])) {
      throw NonFiniteInput("Envelope: levels must be finite and >= 0");
    }
    cumulative_[i + 1] = cumulative_[i] + levels_[i] * (grid_[i + 1] - grid_[i]);
  }
}

Envelope Envelope::constant(double level, double t_max) {
  if (!(t_max > 0.0)) throw InvalidArgument("Envelope: t_max must be > 0");
  return Envelope({0.0, t_max}, {level}, EnvelopeKind::constant);
}

std::size_t Envelope::segment_of(double t) const {
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const auto idx = static_cast<std::ptrdiff_t>(it - grid_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(levels_.size()) - 1));
}

double Envelope::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_max()) return integral();
  const std::size_t k = segment_of(t);
  return cumulative_[k] + levels_[k] * (t - grid_[k]);
}

std::vector<double> uniform_grid(double t_max, int n) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("uniform_grid: t_max must be finite and > 0");
  if (n < 1) throw InvalidArgument("uniform_grid: need at least one segment");
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n);
  grid.back() = t_max;
  return grid;
}

double segment_bound(double t0, double t1, double y0, double y1, double d0, double d1) {
  double m = y0;
  const double gap = d0 - d1;
  if (gap != 0.0 && std::abs(gap) >= 1e-12 * (1.0 + std::abs(d0))) {
    double x = (y1 - y0 + d0 * t0 - d1 * t1) / gap;
    x = std::clamp(x, t0, t1);
    m = d0 * x + y0 - d0 * t0;
  }
  return std::max({y0, y1, m});
}

double combine_channels(std::span<const double> channel_values, Strategy strategy, double refresh_rate) {
  double total = 0.0;
  switch (strategy) {
    case Strategy::Signed:
    case Strategy::VectorizedSigned:
      for (double b : channel_values) total += std::max(0.0, b);
      return total + refresh_rate;
    case Strategy::Plain:
    case Strategy::Vectorized:
    case Strategy::Brent:
      for (double b : channel_values) total += b;
      return total;
  }
  return total;
}

Envelope upper_bound_grid(const ChannelGrid& nodes, std::span<const double> grid, Strategy strategy,
                          double refresh_rate) {
  const int n_nodes = nodes.nodes();
  if (n_nodes < 2 || static_cast<std::size_t>(n_nodes) != grid.size()) {
    throw InvalidArgument("upper_bound_grid: node data must cover all N + 1 grid nodes");
  }
  if (!nodes.values.allFinite() || !nodes.slopes.allFinite()) {
    throw NonFiniteInput("upper_bound_grid: non-finite rate value or derivative on the grid");
  }
  const int n_channels = nodes.channels();
  std::vector<double> levels(static_cast<std::size_t>(n_nodes) - 1);
  std::vector<double> bounds(static_cast<std::size_t>(n_channels));
  for (int i = 0; i + 1 < n_nodes; ++i) {
    for (int c = 0; c < n_channels; ++c) {
      bounds[c] = segment_bound(grid[i], grid[i + 1], nodes.values(c, i), nodes.values(c, i + 1),
                                nodes.slopes(c, i), nodes.slopes(c, i + 1));
    }
    levels[i] = std::max(0.0, combine_channels(bounds, strategy, refresh_rate));
  }
  return Envelope(std::vector<double>(grid.begin(), grid.end()), std::move(levels), EnvelopeKind::grid);
}

BrentBound upper_bound_brent(const std::function<double(double)>& rate, double t_max, BrentOptions options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("upper_bound_brent: t_max must be > 0");
  if (!(options.rel_tol > 0.0)) throw InvalidArgument("upper_bound_brent: tolerance must be > 0");

  int evaluations = 0;
  double best = -std::numeric_limits<double>::infinity();
  // Brent minimises g = -rate.
  auto g = [&](double t) {
    ++evaluations;
    const double r = rate(t);
    if (!std::isfinite(r)) throw NonFiniteInput("upper_bound_brent: non-finite rate");
    best = std::max(best, r);
    return -r;
  };

  const double f_left = -g(0.0);
  const double f_right = -g(t_max);
  const double endpoint_max = std::max(f_left, f_right);

  constexpr double kGolden = 0.3819660112501051;
  double a = 0.0;
  double b = t_max;
  double x = a + kGolden * (b - a);
  double fx = g(x);
  if (-fx <= endpoint_max) {
    return {Envelope::constant(std::max(0.0, endpoint_max), t_max), evaluations};
  }

  const double abs_tol = 1e-10 * t_max;
  double w = x, v = x, fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = options.rel_tol * std::abs(x) + abs_tol;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = x >= xm ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
    const double fu = g(u);
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {Envelope::constant(std::max(0.0, best), t_max), evaluations};
}

}  // namespace pdmp
