#ifndef PDMP_TARGETS_HPP
#define PDMP_TARGETS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pdmp/potential.hpp"

namespace pdmp {

/// U = |x|^2 / 2.
[[nodiscard]] TargetPotential gaussian_std(int dim);

/// Independent Gaussian with the given precisions, U = sum_i p_i x_i^2 / 2.
[[nodiscard]] TargetPotential gaussian_diag(std::vector<double> precisions);

struct MixtureComponent {
  Vector mean;
  double scale = 1.0;  // isotropic standard deviation
  double weight = 1.0;
};

/// Mixture of isotropic Gaussians, U = -log sum_k w_k N(x; mu_k, s_k^2 I).
/// Gradient and Hessian-vector product use responsibilities computed with a
/// log-sum-exp guard. Weights must be positive and are renormalised.
[[nodiscard]] TargetPotential gaussian_mixture(std::string name, std::vector<MixtureComponent> components);

/// 0.5 N((0,0), I) + 0.5 N((1,1), sigma^2 I).
[[nodiscard]] TargetPotential two_scale_mixture(double sigma = 0.03);

/// Twenty unit-variance components in R^2 with means drawn once from
/// N(0, 3^2 I) using `seed`; equal weights.
[[nodiscard]] TargetPotential local_mixture_20(std::uint64_t seed);
[[nodiscard]] std::vector<Vector> local_mixture_means(std::uint64_t seed, int count = 20);

/// U = x1^2 / 2 + (x2 - x1^2 + 1)^2 + sum_{i>=3} x_i^2, d >= 2.
[[nodiscard]] TargetPotential banana(int dim);

struct TargetSpec {
  std::string name;  // gaussian_std | two_scale_mixture | local_mixture_20 | banana
  int dim = 2;
  double sigma = 0.03;       // two_scale_mixture
  std::uint64_t seed = 2024;  // local_mixture_20

  void validate() const;
};

/// Registry lookup; throws InvalidArgument for unknown names or bad params.
[[nodiscard]] TargetPotential make_target(const TargetSpec& spec);

}  // namespace pdmp

#endif  // PDMP_TARGETS_HPP
