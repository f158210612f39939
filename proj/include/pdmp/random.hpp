#ifndef PDMP_RANDOM_HPP
#define PDMP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>

#include "pdmp/core.hpp"

namespace pdmp {

/// Seeded random source for one chain.
///
/// Child streams for parallel chains are derived with
/// `child_seed = splitmix64(seed ^ splitmix64(index + 0x9E3779B97F4A7C15))`,
/// so replicate `i` of a run always sees the same draws regardless of how
/// many workers execute the replicates.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] RandomStream split(std::uint64_t index) const;

  double uniform();  // open interval (0, 1)
  double exponential();
  double normal();
  Vector normal_vector(int dim);
  Vector sphere(int dim);
  Vector sign_vector(int dim);
  /// Index drawn with probability proportional to `weights` (non-negative,
  /// positive sum).
  int categorical(std::span<const double> weights);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace pdmp

#endif  // PDMP_RANDOM_HPP
