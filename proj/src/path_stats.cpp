#include "pdmp/path_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdmp {

namespace {

struct SegmentView {
  const Vector& x;
  const Vector& v;
  double dt;
};

// Calls f on each path segment: initial state to first event, event to event,
// and the tail from the last event to final_time when it is positive.
template <class F>
void for_each_segment(const Skeleton& sk, F&& f) {
  const Vector* x = &sk.initial.x;
  const Vector* v = &sk.initial.v;
  double t = 0.0;
  for (const auto& e : sk.events) {
    if (e.t > t) f(SegmentView{*x, *v, e.t - t});
    x = &e.x;
    v = &e.v;
    t = e.t;
  }
  if (sk.final_time > t) f(SegmentView{*x, *v, sk.final_time - t});
}

double total_time(const Skeleton& sk) {
  if (!(sk.final_time > 0.0)) throw InvalidArgument("path statistics need a skeleton with positive duration");
  return sk.final_time;
}

void require_closed_form(FlowKind flow) {
  if (flow != FlowKind::linear && flow != FlowKind::circular) {
    throw UnsupportedFlow("no closed-form segment integral for this flow");
  }
}

}  // namespace

Vector segment_integral(const Vector& x, const Vector& v, double dt, FlowKind flow) {
  require_closed_form(flow);
  if (flow == FlowKind::linear) return x * dt + v * (0.5 * dt * dt);
  return x * std::sin(dt) + v * (1.0 - std::cos(dt));
}

Vector segment_square_integral(const Vector& x, const Vector& v, double dt, FlowKind flow) {
  require_closed_form(flow);
  if (flow == FlowKind::linear) {
    return x.cwiseProduct(x) * dt + x.cwiseProduct(v) * (dt * dt) + v.cwiseProduct(v) * (dt * dt * dt / 3.0);
  }
  const double s = std::sin(dt);
  const double s2 = std::sin(2.0 * dt) / 4.0;
  return x.cwiseProduct(x) * (0.5 * dt + s2) + x.cwiseProduct(v) * (s * s) + v.cwiseProduct(v) * (0.5 * dt - s2);
}

Vector path_mean(const Skeleton& skeleton, FlowKind flow) {
  require_closed_form(flow);
  const double T = total_time(skeleton);
  Vector acc = Vector::Zero(skeleton.initial.x.size());
  for_each_segment(skeleton, [&](const SegmentView& seg) { acc += segment_integral(seg.x, seg.v, seg.dt, flow); });
  return acc / T;
}

Vector path_mean(const Skeleton& skeleton, const PdmpModel& model) {
  return path_mean(skeleton, model.flow_kind());
}

Vector path_second_moment(const Skeleton& skeleton, FlowKind flow) {
  require_closed_form(flow);
  const double T = total_time(skeleton);
  Vector acc = Vector::Zero(skeleton.initial.x.size());
  for_each_segment(skeleton,
                   [&](const SegmentView& seg) { acc += segment_square_integral(seg.x, seg.v, seg.dt, flow); });
  return acc / T;
}

Vector path_second_moment(const Skeleton& skeleton, const PdmpModel& model) {
  return path_second_moment(skeleton, model.flow_kind());
}

std::vector<Vector> sample_at_times(const Skeleton& skeleton, const PdmpModel& model, std::span<const double> times) {
  std::vector<double> event_times;
  event_times.reserve(skeleton.events.size());
  for (const auto& e : skeleton.events) event_times.push_back(e.t);

  std::vector<Vector> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0) || t > skeleton.final_time) {
      throw OutOfRange("sample_at_times: query time " + std::to_string(t) + " outside [0, " +
                       std::to_string(skeleton.final_time) + "]");
    }
    // Last event at or before t; the initial state when none.
    const auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
    if (it == event_times.begin()) {
      out.push_back(model.advance(skeleton.initial, t).x);
      continue;
    }
    const auto& e = skeleton.events[static_cast<std::size_t>(it - event_times.begin()) - 1];
    out.push_back(t == e.t ? e.x : model.advance(State(e.x, e.v), t - e.t).x);
  }
  return out;
}

}  // namespace pdmp
