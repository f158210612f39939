#include "pdmp/random.hpp"

#include <cmath>
#include <numeric>

namespace pdmp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomStream RandomStream::split(std::uint64_t index) const { return RandomStream(derive_seed(seed_, index)); }

double RandomStream::uniform() {
  // 53 random bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::normal() { return normal_(engine_); }

Vector RandomStream::normal_vector(int dim) {
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out[i] = normal();
  return out;
}

Vector RandomStream::sphere(int dim) {
  for (;;) {
    Vector out = normal_vector(dim);
    const double n = out.norm();
    if (n > 1e-300) return out / n;
  }
}

Vector RandomStream::sign_vector(int dim) {
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out[i] = (engine_() >> 63) != 0 ? 1.0 : -1.0;
  return out;
}

int RandomStream::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidArgument("categorical: weights must have a positive finite sum");
  }
  const double target = uniform() * total;
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += weights[i];
    if (target < acc) return last_positive;
  }
  return last_positive;
}

}  // namespace pdmp
