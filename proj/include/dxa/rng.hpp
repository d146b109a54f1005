#pragma once

#include <cstdint>
#include <random>

namespace dxa {

/// Seedable, splittable random stream.
///
/// A stream is never shared between threads; independent work units obtain
/// their own stream with split(), which hashes (seed, stream id) so that the
/// child sequence does not depend on how far the parent has advanced.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  Rng split(std::uint64_t stream) const;

  double uniform();                  // (0, 1)
  double normal();                   // N(0, 1)
  double normal(double mu, double sd);
  double gamma(double shape);        // Gamma(shape, 1)
  double chi_squared(double df);
  std::size_t categorical_log(const double* log_weights, std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dxa
