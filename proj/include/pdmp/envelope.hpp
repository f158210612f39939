#ifndef PDMP_ENVELOPE_HPP
#define PDMP_ENVELOPE_HPP

#include <functional>
#include <span>
#include <vector>

#include "pdmp/rate.hpp"

namespace pdmp {

enum class EnvelopeKind { grid, constant };

/// Piecewise-constant dominating rate on [0, t_max].
class Envelope {
 public:
  Envelope() = default;
  /// grid: strictly increasing, grid[0] == 0, size N + 1 >= 2.
  /// levels: size N, non-negative and finite.
  Envelope(std::vector<double> grid, std::vector<double> levels, EnvelopeKind kind);

  static Envelope constant(double level, double t_max);

  [[nodiscard]] EnvelopeKind kind() const { return kind_; }
  [[nodiscard]] std::size_t segments() const { return levels_.size(); }
  [[nodiscard]] double t_max() const { return grid_.back(); }
  [[nodiscard]] std::span<const double> grid() const { return grid_; }
  [[nodiscard]] std::span<const double> levels() const { return levels_; }
  /// cumulative()[k] = integral of the envelope over [0, grid[k]].
  [[nodiscard]] std::span<const double> cumulative() const { return cumulative_; }
  [[nodiscard]] double integral() const { return cumulative_.back(); }

  /// Segment containing t; t_max belongs to the last segment.
  [[nodiscard]] std::size_t segment_of(double t) const;
  [[nodiscard]] double level_at(double t) const { return levels_[segment_of(t)]; }
  /// Integral of the envelope over [0, t].
  [[nodiscard]] double integral_to(double t) const;

 private:
  std::vector<double> grid_;
  std::vector<double> levels_;
  std::vector<double> cumulative_;
  EnvelopeKind kind_ = EnvelopeKind::grid;
};

/// Nodes i * t_max / n for i = 0..n.
[[nodiscard]] std::vector<double> uniform_grid(double t_max, int n);

/// Bound of one smooth channel on [t0, t1] from its endpoint values and
/// slopes: the larger of both endpoint values and the height of the
/// intersection of the two tangents (abscissa clipped to the segment).
[[nodiscard]] double segment_bound(double t0, double t1, double y0, double y1, double d0, double d1);

/// Recombines per-channel quantities into a rate (or a rate bound):
/// Plain/Vectorized sum, Signed/VectorizedSigned sum positive parts and add
/// the refresh rate. Used both for envelope levels and true rates.
[[nodiscard]] double combine_channels(std::span<const double> channel_values, Strategy strategy,
                                      double refresh_rate);

/// Grid envelope from channel data on the grid nodes. Throws NonFiniteInput
/// on NaN or infinite node data. Levels are floored at 0.
[[nodiscard]] Envelope upper_bound_grid(const ChannelGrid& nodes, std::span<const double> grid, Strategy strategy,
                                        double refresh_rate);

struct BrentOptions {
  double rel_tol = 1e-6;
  int max_iter = 100;
};

struct BrentBound {
  Envelope envelope;
  int evaluations = 0;
};

/// Constant bound max over [0, t_max] of rate(t), found with Brent's method.
/// Both endpoints are evaluated first; after one golden-section step, if the
/// interior point does not beat the better endpoint the rate is taken as
/// monotone and that endpoint is returned. Otherwise Brent runs to tolerance.
[[nodiscard]] BrentBound upper_bound_brent(const std::function<double(double)>& rate, double t_max,
                                           BrentOptions options = {});

}  // namespace pdmp

#endif  // PDMP_ENVELOPE_HPP
