#include "pdmp/models.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pdmp {

Vector flip(const Vector& v, int m) {
  if (m < 0 || m >= v.size()) throw InvalidArgument("flip: coordinate out of range");
  Vector out = v;
  out[m] = -out[m];
  return out;
}

Vector reflect(const Vector& w, const Vector& n) {
  const double nn = n.squaredNorm();
  if (!(nn > 0.0)) throw InvalidArgument("reflect: zero normal");
  return w - (2.0 * w.dot(n) / nn) * n;
}

Vector zigzag_kernel(const Vector& v, std::span<const double> rates, RandomStream& rng) {
  double total = 0.0;
  for (double r : rates) total += r;
  if (!(total > 0.0)) return v;
  return flip(v, rng.categorical(rates));
}

Vector bps_kernel(const Vector& v, const Vector& grad, double refresh_rate, RandomStream& rng) {
  const double gn2 = grad.squaredNorm();
  if (gn2 == 0.0) return rng.normal_vector(static_cast<int>(v.size()));
  const double bounce = std::max(0.0, grad.dot(v));
  const double total = bounce + refresh_rate;
  if (!(total > 0.0)) return v;
  if (rng.uniform() * total < bounce) return reflect(v, grad);
  return rng.normal_vector(static_cast<int>(v.size()));
}

void KernelSpec::validate() const {
  if (!(fec_rotation_prob >= 0.0 && fec_rotation_prob <= 1.0)) {
    throw InvalidArgument("fec_rotation_prob must lie in [0, 1]");
  }
  if (!(fec_rotation_max_angle >= 0.0) || !std::isfinite(fec_rotation_max_angle)) {
    throw InvalidArgument("fec_rotation_max_angle must be finite and >= 0");
  }
}

double fec_parallel_magnitude(int dim, RandomStream& rng) {
  if (dim <= 1) return 1.0;
  // w = 1 - a^2 ~ Beta((d - 1) / 2, 1).
  const double w = std::pow(rng.uniform(), 2.0 / static_cast<double>(dim - 1));
  return std::sqrt(std::max(0.0, 1.0 - w));
}

namespace {

// Unit vector orthogonal to every column of `basis` (orthonormal columns).
Vector random_orthogonal(const std::vector<const Vector*>& basis, int dim, RandomStream& rng) {
  for (;;) {
    Vector u = rng.normal_vector(dim);
    for (const Vector* b : basis) u -= u.dot(*b) * *b;
    const double n = u.norm();
    if (n > 1e-10) return u / n;
  }
}

}  // namespace

Vector fec_kernel(const Vector& v, const Vector& grad, const KernelSpec& spec, RandomStream& rng) {
  const int dim = static_cast<int>(v.size());
  const double gnorm = grad.norm();
  if (!(gnorm >= 1e-14)) throw DegenerateGradient("fec_kernel: gradient norm below 1e-14");
  const Vector n = grad / gnorm;
  if (dim == 1) return -n;

  Vector perp = v - v.dot(n) * n;
  const double pnorm = perp.norm();
  Vector e = pnorm > 1e-12 ? Vector(perp / pnorm) : random_orthogonal({&n}, dim, rng);

  if (rng.uniform() < spec.fec_rotation_prob) {
    if (dim == 2) {
      e = -e;
    } else {
      const Vector u = random_orthogonal({&n, &e}, dim, rng);
      const double theta = spec.fec_rotation_max_angle * (2.0 * rng.uniform() - 1.0);
      e = std::cos(theta) * e + std::sin(theta) * u;
    }
  }

  const double a = fec_parallel_magnitude(dim, rng);
  Vector out = -a * n + std::sqrt(std::max(0.0, 1.0 - a * a)) * e;
  return out / out.norm();
}

// ---------------------------------------------------------------------------

Vector ZigZag::jump(const State& s, const Vector& grad, RandomStream& rng) const {
  std::vector<double> rates(static_cast<std::size_t>(s.v.size()));
  for (Eigen::Index i = 0; i < s.v.size(); ++i) rates[i] = std::max(0.0, grad[i] * s.v[i]);
  return zigzag_kernel(s.v, rates, rng);
}

Vector ZigZag::initial_velocity(int dim, RandomStream& rng) const { return rng.sign_vector(dim); }

BouncyParticle::BouncyParticle(double refresh_rate) : refresh_(refresh_rate) {
  if (!(refresh_rate >= 0.0) || !std::isfinite(refresh_rate)) {
    throw InvalidArgument("refresh_rate must be finite and >= 0");
  }
}

Vector BouncyParticle::jump(const State& s, const Vector& grad, RandomStream& rng) const {
  return bps_kernel(s.v, grad, refresh_, rng);
}

Vector BouncyParticle::initial_velocity(int dim, RandomStream& rng) const { return rng.normal_vector(dim); }

Boomerang::Boomerang(double refresh_rate) : refresh_(refresh_rate) {
  if (!(refresh_rate >= 0.0) || !std::isfinite(refresh_rate)) {
    throw InvalidArgument("refresh_rate must be finite and >= 0");
  }
}

Vector Boomerang::jump(const State& s, const Vector& grad, RandomStream& rng) const {
  return bps_kernel(s.v, grad, refresh_, rng);
}

Vector Boomerang::initial_velocity(int dim, RandomStream& rng) const { return rng.normal_vector(dim); }

ForwardEventChain::ForwardEventChain(KernelSpec spec) : spec_(spec) { spec_.validate(); }

Vector ForwardEventChain::jump(const State& s, const Vector& grad, RandomStream& rng) const {
  return fec_kernel(s.v, grad, spec_, rng);
}

Vector ForwardEventChain::initial_velocity(int dim, RandomStream& rng) const { return rng.sphere(dim); }

TargetPotential boomerang_adjusted(const TargetPotential& target) {
  auto grad = [target](const Vector& x) -> Vector { return target.grad(x) - x; };
  TargetPotential::HvpFn hvp;
  if (target.has_hvp()) {
    hvp = [target](const Vector& x, const Vector& w) -> Vector { return target.hvp(x, w) - w; };
  }
  TargetPotential::ValueFn value;
  if (target.has_value()) {
    value = [target](const Vector& x) { return target.value(x) - 0.5 * x.squaredNorm(); };
  }
  auto batch = [target](const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) {
    target.grad_hvp_batch(x, w, g, hw);
    g -= x;
    if (hw) *hw -= w;
  };
  return TargetPotential(target.name() + "/boomerang", target.dim(), grad, hvp, value).with_batch(batch);
}

std::shared_ptr<const PdmpModel> make_model(std::string_view name, const ModelOptions& options) {
  if (name == "zigzag") return std::make_shared<ZigZag>();
  if (name == "bps") return std::make_shared<BouncyParticle>(options.refresh_rate);
  if (name == "boomerang") return std::make_shared<Boomerang>(options.refresh_rate);
  if (name == "fec") return std::make_shared<ForwardEventChain>(options.kernel);
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected zigzag, bps, boomerang or fec)");
}

}  // namespace pdmp
