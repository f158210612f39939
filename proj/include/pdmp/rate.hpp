#ifndef PDMP_RATE_HPP
#define PDMP_RATE_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/potential.hpp"

namespace pdmp {

/// How the event rate is split into channels for bounding.
enum class Strategy {
  Plain,             // bound lambda itself
  Signed,            // bound <grad U, v>, re-apply (.)_+ and refresh (bounce rates)
  Vectorized,        // bound each (grad_i U v_i)_+ (zigzag rates)
  VectorizedSigned,  // bound each grad_i U v_i, re-apply (.)_+ (zigzag rates)
  Brent,             // constant bound from Brent maximisation of lambda
};

[[nodiscard]] std::string_view to_string(Strategy s);
/// Accepts "plain", "signed", "vectorized", "vectorized_signed", "brent".
[[nodiscard]] Strategy parse_strategy(std::string_view name);

struct RateBundle {
  Strategy strategy = Strategy::Plain;
  int n_channels = 1;
  double refresh_rate = 0.0;
};

/// Checks the strategy against the model's rate form and fills n_channels.
[[nodiscard]] RateBundle make_rate_bundle(const PdmpModel& model, Strategy strategy, int dim);

struct ChannelPoint {
  double value = 0.0;
  double slope = 0.0;  // time derivative along the flow
};

/// Channel values and slopes on a set of node times, stored channel-major:
/// value(c, k) is channel c at node k.
struct ChannelGrid {
  Eigen::MatrixXd values;
  Eigen::MatrixXd slopes;

  [[nodiscard]] int channels() const { return static_cast<int>(values.rows()); }
  [[nodiscard]] int nodes() const { return static_cast<int>(values.cols()); }
};

/// Rate evaluated at a point on the flow, with what the jump kernel needs.
struct RatePoint {
  State state;
  Vector grad;
  double rate = 0.0;
};

struct DerivativeOptions {
  /// Used when the potential has no Hessian-vector product.
  bool allow_finite_differences = true;
};

/// Central-difference step used for the Hessian-vector fallback.
[[nodiscard]] double fd_step(const Vector& x);

/// Evaluates rate channels along the flow from a fixed state, for one chain.
///
/// Cost per node: one gradient plus one Hessian-vector product when the
/// potential supplies it, otherwise three gradients (central differences).
/// All d vectorized channels share the same gradient. Counters are local to
/// the evaluator; the potential's own shared counters advance as well.
class RateEvaluator {
 public:
  RateEvaluator(const PdmpModel& model, const TargetPotential& potential, RateBundle bundle,
                DerivativeOptions options = {});

  [[nodiscard]] const RateBundle& bundle() const { return bundle_; }
  [[nodiscard]] const PdmpModel& model() const { return *model_; }

  /// Channels (value, slope) at time t along the flow from s.
  [[nodiscard]] std::vector<ChannelPoint> channels(const State& s, double t);
  /// Batched form over node times.
  void channels_on_grid(const State& s, std::span<const double> times, ChannelGrid& out);
  /// Full rate lambda(t) (positive parts and refresh applied).
  [[nodiscard]] RatePoint rate(const State& s, double t);

  [[nodiscard]] std::uint64_t grad_calls() const { return grad_calls_; }
  [[nodiscard]] std::uint64_t hvp_calls() const { return hvp_calls_; }

 private:
  using ColumnRef = Eigen::Ref<const Vector>;
  void fill_channels(const ColumnRef& v, const ColumnRef& grad, const ColumnRef& hv, const ColumnRef& drift,
                     double* values, double* slopes) const;
  Vector gradient(const Vector& x);
  Vector hessian_times(const Vector& x, const Vector& w);

  const PdmpModel* model_;
  const TargetPotential* potential_;
  RateBundle bundle_;
  DerivativeOptions options_;
  std::uint64_t grad_calls_ = 0;
  std::uint64_t hvp_calls_ = 0;
  // Scratch for channels_on_grid.
  Matrix xs_, vs_, gs_, hvs_, drifts_, plus_, minus_;
};

/// Convenience form of RateEvaluator::channels.
[[nodiscard]] std::vector<ChannelPoint> rate_channels(const PdmpModel& model, const TargetPotential& potential,
                                                      const RateBundle& bundle, const State& s, double t,
                                                      DerivativeOptions options = {});

}  // namespace pdmp

#endif  // PDMP_RATE_HPP
