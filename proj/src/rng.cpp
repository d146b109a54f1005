#include "dxa/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "dxa/errors.hpp"

namespace dxa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

double Rng::normal(double mu, double sd) { return mu + sd * normal_(engine_); }

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape == 1.0) return -std::log(uniform());
  std::gamma_distribution<double> g(shape, 1.0);
  return g(engine_);
}

double Rng::chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

std::size_t Rng::categorical_log(const double* log_weights, std::size_t n) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) top = std::max(top, log_weights[k]);
  if (!std::isfinite(top)) throw NumericError("categorical draw with no finite weight");
  thread_local std::vector<double> w;
  w.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += (w[k] = std::exp(log_weights[k] - top));
  double u = uniform() * total;
  for (std::size_t k = 0; k < n; ++k) {
    u -= w[k];
    if (u <= 0.0) return k;
  }
  return n - 1;
}

}  // namespace dxa
