#include "pdmp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdmp {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Plain:
      return "plain";
    case Strategy::Signed:
      return "signed";
    case Strategy::Vectorized:
      return "vectorized";
    case Strategy::VectorizedSigned:
      return "vectorized_signed";
    case Strategy::Brent:
      return "brent";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "plain") return Strategy::Plain;
  if (name == "signed") return Strategy::Signed;
  if (name == "vectorized") return Strategy::Vectorized;
  if (name == "vectorized_signed") return Strategy::VectorizedSigned;
  if (name == "brent" || name == "brent_baseline") return Strategy::Brent;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

RateBundle make_rate_bundle(const PdmpModel& model, Strategy strategy, int dim) {
  if (dim < 1) throw InvalidArgument("rate bundle: dim must be >= 1");
  const bool zigzag = model.rate_form() == RateForm::zigzag;
  const bool vectorized = strategy == Strategy::Vectorized || strategy == Strategy::VectorizedSigned;
  if (vectorized && !zigzag) {
    throw InvalidArgument("strategy '" + std::string(to_string(strategy)) +
                          "' requires a zig-zag rate; model '" + std::string(model.name()) + "' has a bounce rate");
  }
  if (strategy == Strategy::Signed && zigzag) {
    throw InvalidArgument("strategy 'signed' requires a bounce rate; use 'vectorized_signed' for zig-zag");
  }
  RateBundle bundle;
  bundle.strategy = strategy;
  bundle.n_channels = vectorized ? dim : 1;
  bundle.refresh_rate = model.refresh_rate();
  if (!(bundle.refresh_rate >= 0.0)) throw InvalidArgument("refresh_rate must be >= 0");
  return bundle;
}

double fd_step(const Vector& x) {
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  return std::max(1e-6, 1e-8 * (1.0 + scale));
}

RateEvaluator::RateEvaluator(const PdmpModel& model, const TargetPotential& potential, RateBundle bundle,
                             DerivativeOptions options)
    : model_(&model), potential_(&potential), bundle_(bundle), options_(options) {}

Vector RateEvaluator::gradient(const Vector& x) {
  ++grad_calls_;
  return potential_->grad(x);
}

Vector RateEvaluator::hessian_times(const Vector& x, const Vector& w) {
  if (potential_->has_hvp()) {
    ++hvp_calls_;
    return potential_->hvp(x, w);
  }
  if (!options_.allow_finite_differences) {
    throw MissingHvp("rate derivative needs a Hessian-vector product and finite differences are disabled");
  }
  const double h = fd_step(x);
  const Vector plus = gradient(x + h * w);
  const Vector minus = gradient(x - h * w);
  return (plus - minus) / (2.0 * h);
}

void RateEvaluator::fill_channels(const ColumnRef& v, const ColumnRef& grad, const ColumnRef& hv,
                                  const ColumnRef& drift, double* values, double* slopes) const {
  // Along every shipped flow dx/dt = v, so d/dt grad U(x_t) = H v.
  const double refresh = bundle_.refresh_rate;
  if (model_->rate_form() == RateForm::zigzag) {
    const Eigen::Index d = v.size();
    switch (bundle_.strategy) {
      case Strategy::Vectorized:
      case Strategy::VectorizedSigned: {
        const bool positive_part = bundle_.strategy == Strategy::Vectorized;
        for (Eigen::Index i = 0; i < d; ++i) {
          const double c = grad[i] * v[i];
          const double dc = hv[i] * v[i] + grad[i] * drift[i];
          if (positive_part) {
            values[i] = std::max(0.0, c);
            slopes[i] = c > 0.0 ? dc : 0.0;
          } else {
            values[i] = c;
            slopes[i] = dc;
          }
        }
        return;
      }
      default: {
        double value = 0.0;
        double slope = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
          const double c = grad[i] * v[i];
          if (c > 0.0) {
            value += c;
            slope += hv[i] * v[i] + grad[i] * drift[i];
          }
        }
        values[0] = value;
        slopes[0] = slope;
        return;
      }
    }
  }

  const double c = grad.dot(v);
  const double dc = hv.dot(v) + grad.dot(drift);
  if (bundle_.strategy == Strategy::Signed) {
    values[0] = c;
    slopes[0] = dc;
  } else {
    values[0] = std::max(0.0, c) + refresh;
    slopes[0] = c > 0.0 ? dc : 0.0;
  }
}

std::vector<ChannelPoint> RateEvaluator::channels(const State& s, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("rate_channels: t must be >= 0");
  const State st = model_->advance(s, t);
  const Vector grad = gradient(st.x);
  const Vector hv = hessian_times(st.x, st.v);
  const Vector drift = model_->velocity_drift(st);
  std::vector<double> values(bundle_.n_channels);
  std::vector<double> slopes(bundle_.n_channels);
  fill_channels(st.v, grad, hv, drift, values.data(), slopes.data());
  std::vector<ChannelPoint> out(bundle_.n_channels);
  for (int c = 0; c < bundle_.n_channels; ++c) out[c] = {values[c], slopes[c]};
  return out;
}

void RateEvaluator::channels_on_grid(const State& s, std::span<const double> times, ChannelGrid& out) {
  const auto n_nodes = static_cast<Eigen::Index>(times.size());
  const Eigen::Index d = s.x.size();
  const Eigen::Map<const Eigen::RowVectorXd> t(times.data(), n_nodes);
  xs_.resize(d, n_nodes);
  vs_.resize(d, n_nodes);
  drifts_.resize(d, n_nodes);
  switch (model_->flow_kind()) {
    case FlowKind::linear:
      xs_.noalias() = s.x * Eigen::RowVectorXd::Ones(n_nodes) + s.v * t;
      vs_.colwise() = s.v;
      drifts_.setZero();
      break;
    case FlowKind::circular: {
      const Eigen::RowVectorXd c = t.array().cos().matrix();
      const Eigen::RowVectorXd sn = t.array().sin().matrix();
      xs_.noalias() = s.x * c + s.v * sn;
      vs_.noalias() = s.v * c - s.x * sn;
      drifts_ = -xs_;
      break;
    }
    case FlowKind::custom:
      for (Eigen::Index k = 0; k < n_nodes; ++k) {
        const State st = model_->advance(s, times[k]);
        xs_.col(k) = st.x;
        vs_.col(k) = st.v;
        drifts_.col(k) = model_->velocity_drift(st);
      }
      break;
  }

  grad_calls_ += static_cast<std::uint64_t>(n_nodes);
  if (potential_->has_hvp()) {
    hvp_calls_ += static_cast<std::uint64_t>(n_nodes);
    potential_->grad_hvp_batch(xs_, vs_, gs_, &hvs_);
  } else {
    if (!options_.allow_finite_differences) {
      throw MissingHvp("rate derivative needs a Hessian-vector product and finite differences are disabled");
    }
    potential_->grad_hvp_batch(xs_, vs_, gs_, nullptr);
    Eigen::RowVectorXd h(n_nodes);
    for (Eigen::Index k = 0; k < n_nodes; ++k) h[k] = fd_step(xs_.col(k));
    plus_ = xs_ + vs_ * h.asDiagonal();
    minus_ = xs_ - vs_ * h.asDiagonal();
    Matrix g_plus, g_minus;
    grad_calls_ += 2 * static_cast<std::uint64_t>(n_nodes);
    potential_->grad_hvp_batch(plus_, vs_, g_plus, nullptr);
    potential_->grad_hvp_batch(minus_, vs_, g_minus, nullptr);
    hvs_ = (g_plus - g_minus) * (0.5 * h.cwiseInverse()).asDiagonal();
  }

  out.values.resize(bundle_.n_channels, n_nodes);
  out.slopes.resize(bundle_.n_channels, n_nodes);
  for (Eigen::Index k = 0; k < n_nodes; ++k) {
    fill_channels(vs_.col(k), gs_.col(k), hvs_.col(k), drifts_.col(k), out.values.col(k).data(),
                  out.slopes.col(k).data());
  }
}

RatePoint RateEvaluator::rate(const State& s, double t) {
  RatePoint p;
  p.state = model_->advance(s, t);
  p.grad = gradient(p.state.x);
  p.rate = model_->rate(p.state, p.grad);
  return p;
}

std::vector<ChannelPoint> rate_channels(const PdmpModel& model, const TargetPotential& potential,
                                        const RateBundle& bundle, const State& s, double t,
                                        DerivativeOptions options) {
  RateEvaluator eval(model, potential, bundle, options);
  return eval.channels(s, t);
}

}  // namespace pdmp
