#ifndef PDMP_MODELS_HPP
#define PDMP_MODELS_HPP

#include <memory>
#include <span>
#include <string_view>

#include "pdmp/model.hpp"
#include "pdmp/potential.hpp"

namespace pdmp {

// ---------------------------------------------------------------------------
// Jump kernels
// ---------------------------------------------------------------------------

/// F_m(v): v with coordinate m (0-based) negated.
[[nodiscard]] Vector flip(const Vector& v, int m);

/// Reflection of w across the hyperplane orthogonal to n.
[[nodiscard]] Vector reflect(const Vector& w, const Vector& n);

/// Zig-Zag jump: flips coordinate m with probability rates[m] / sum(rates).
/// Returns v unchanged when every rate is zero.
[[nodiscard]] Vector zigzag_kernel(const Vector& v, std::span<const double> rates, RandomStream& rng);

/// Bouncy-particle jump: reflect with probability <grad,v>_+ / lambda,
/// otherwise refresh from N(0, I). A zero gradient always refreshes.
[[nodiscard]] Vector bps_kernel(const Vector& v, const Vector& grad, double refresh_rate, RandomStream& rng);

struct KernelSpec {
  double fec_rotation_prob = 0.1;
  /// Rotation angle of the orthogonal part is Uniform(-max, max).
  double fec_rotation_max_angle = 0.39269908169872414;  // pi / 8

  void validate() const;
};

/// Forward event-chain jump on the unit sphere. The component along the
/// gradient is redrawn from the outgoing flux law and points against the
/// gradient; with probability `fec_rotation_prob` the orthogonal direction
/// is rotated in a random plane of the orthogonal complement (a sign change
/// when that complement is one-dimensional).
[[nodiscard]] Vector fec_kernel(const Vector& v, const Vector& grad, const KernelSpec& spec, RandomStream& rng);

/// Magnitude of the parallel component drawn by fec_kernel: density
/// proportional to a (1 - a^2)^((d - 3) / 2) on (0, 1].
[[nodiscard]] double fec_parallel_magnitude(int dim, RandomStream& rng);

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

class ZigZag final : public PdmpModel {
 public:
  [[nodiscard]] std::string_view name() const override { return "zigzag"; }
  [[nodiscard]] FlowKind flow_kind() const override { return FlowKind::linear; }
  [[nodiscard]] RateForm rate_form() const override { return RateForm::zigzag; }
  [[nodiscard]] VelocityFamily velocity_family() const override { return VelocityFamily::hypercube; }
  [[nodiscard]] Vector jump(const State& s, const Vector& grad, RandomStream& rng) const override;
  [[nodiscard]] Vector initial_velocity(int dim, RandomStream& rng) const override;
};

class BouncyParticle final : public PdmpModel {
 public:
  explicit BouncyParticle(double refresh_rate);
  [[nodiscard]] std::string_view name() const override { return "bps"; }
  [[nodiscard]] FlowKind flow_kind() const override { return FlowKind::linear; }
  [[nodiscard]] RateForm rate_form() const override { return RateForm::bounce; }
  [[nodiscard]] VelocityFamily velocity_family() const override { return VelocityFamily::gaussian; }
  [[nodiscard]] double refresh_rate() const override { return refresh_; }
  [[nodiscard]] Vector jump(const State& s, const Vector& grad, RandomStream& rng) const override;
  [[nodiscard]] Vector initial_velocity(int dim, RandomStream& rng) const override;

 private:
  double refresh_;
};

/// Boomerang sampler. Its invariant law has potential U(x) + |x|^2 / 2, so the
/// potential handed to the sampler must already have the Gaussian reference
/// part removed (see boomerang_adjusted).
class Boomerang final : public PdmpModel {
 public:
  explicit Boomerang(double refresh_rate);
  [[nodiscard]] std::string_view name() const override { return "boomerang"; }
  [[nodiscard]] FlowKind flow_kind() const override { return FlowKind::circular; }
  [[nodiscard]] RateForm rate_form() const override { return RateForm::bounce; }
  [[nodiscard]] VelocityFamily velocity_family() const override { return VelocityFamily::gaussian; }
  [[nodiscard]] double refresh_rate() const override { return refresh_; }
  [[nodiscard]] Vector jump(const State& s, const Vector& grad, RandomStream& rng) const override;
  [[nodiscard]] Vector initial_velocity(int dim, RandomStream& rng) const override;

 private:
  double refresh_;
};

class ForwardEventChain final : public PdmpModel {
 public:
  explicit ForwardEventChain(KernelSpec spec = {});
  [[nodiscard]] std::string_view name() const override { return "fec"; }
  [[nodiscard]] FlowKind flow_kind() const override { return FlowKind::linear; }
  [[nodiscard]] RateForm rate_form() const override { return RateForm::bounce; }
  [[nodiscard]] VelocityFamily velocity_family() const override { return VelocityFamily::sphere; }
  [[nodiscard]] Vector jump(const State& s, const Vector& grad, RandomStream& rng) const override;
  [[nodiscard]] Vector initial_velocity(int dim, RandomStream& rng) const override;
  [[nodiscard]] const KernelSpec& spec() const { return spec_; }

 private:
  KernelSpec spec_;
};

/// Potential U(x) - |x|^2 / 2, so that a Boomerang sampler driven by the
/// result targets exp(-U).
[[nodiscard]] TargetPotential boomerang_adjusted(const TargetPotential& target);

struct ModelOptions {
  double refresh_rate = 0.0;
  KernelSpec kernel;
};

/// Registry: "zigzag", "bps", "boomerang", "fec". Throws InvalidArgument for
/// unknown names.
[[nodiscard]] std::shared_ptr<const PdmpModel> make_model(std::string_view name, const ModelOptions& options = {});

}  // namespace pdmp

#endif  // PDMP_MODELS_HPP
