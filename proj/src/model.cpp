#include "pdmp/model.hpp"

#include <cmath>

namespace pdmp {

State flow(FlowKind kind, const State& s, double dt) {
  if (!(dt >= 0.0)) throw InvalidArgument("advance: dt must be >= 0");
  if (dt == 0.0) return s;
  switch (kind) {
    case FlowKind::linear: {
      State out;
      out.x = s.x + dt * s.v;
      out.v = s.v;
      return out;
    }
    case FlowKind::circular: {
      const double c = std::cos(dt);
      const double sn = std::sin(dt);
      State out;
      out.x = c * s.x + sn * s.v;
      out.v = c * s.v - sn * s.x;
      return out;
    }
    case FlowKind::custom:
      break;
  }
  throw UnsupportedFlow("flow: custom flows must override PdmpModel::advance");
}

State PdmpModel::advance(const State& s, double dt) const { return flow(flow_kind(), s, dt); }

Vector PdmpModel::velocity_drift(const State& s) const {
  switch (flow_kind()) {
    case FlowKind::linear:
      return Vector::Zero(s.v.size());
    case FlowKind::circular:
      return -s.x;
    case FlowKind::custom:
      break;
  }
  throw UnsupportedFlow("velocity_drift: custom flows must override it");
}

double PdmpModel::rate(const State& s, const Vector& grad) const {
  if (rate_form() == RateForm::zigzag) {
    return grad.cwiseProduct(s.v).cwiseMax(0.0).sum();
  }
  return std::max(0.0, grad.dot(s.v)) + refresh_rate();
}

void PdmpModel::validate(const State& s) const {
  if (s.x.size() == 0 || s.x.size() != s.v.size()) {
    throw InvalidArgument("state: position and velocity must have the same positive length");
  }
  if (!s.x.allFinite() || !s.v.allFinite()) throw InvalidArgument("state: non-finite entries");
  switch (velocity_family()) {
    case VelocityFamily::hypercube:
      for (Eigen::Index i = 0; i < s.v.size(); ++i) {
        if (std::abs(s.v[i]) != 1.0) throw InvalidArgument("state: zig-zag velocity entries must be +-1");
      }
      break;
    case VelocityFamily::sphere:
      if (std::abs(s.v.norm() - 1.0) > 1e-9) throw InvalidArgument("state: velocity must have unit norm");
      break;
    case VelocityFamily::gaussian:
      break;
  }
}

}  // namespace pdmp
