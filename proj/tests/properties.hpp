#pragma once

// Property checks over random density pairs, shared by the unit suites and
// the acceptance runner. Each returns the worst violation it observed.

#include <algorithm>
#include <cmath>
#include <string>

#include "dxa/measures.hpp"
#include "dxa/rng.hpp"
#include "oracle.hpp"

namespace props {

using namespace dxa;

struct Outcome {
  double worst = 0.0;
  int checked = 0;
  std::string where;

  void record(double err, const std::string& label) {
    ++checked;
    if (!(err <= worst)) {  // NaN counts as a violation
      worst = std::isnan(err) ? INFINITY : err;
      where = label;
    }
  }
};

enum class Family { binormal, bibeta, biexponential };

inline const char* name(Family f) {
  switch (f) {
    case Family::binormal: return "binormal";
    case Family::bibeta: return "bibeta";
    case Family::biexponential: return "biexponential";
  }
  return "?";
}

inline double between(Rng& r, double lo, double hi) { return lo + (hi - lo) * r.uniform(); }

inline NormalParams random_normal(Rng& r) { return {between(r, -3, 3), between(r, 0.3, 3)}; }
inline BetaParams random_beta(Rng& r) { return {between(r, 0.5, 8), between(r, 0.5, 8)}; }
inline ExponentialParams random_exponential(Rng& r) { return {between(r, 0.2, 5)}; }

inline std::string label(const NormalParams& d, const NormalParams& n) {
  return "N(" + std::to_string(d.mu) + "," + std::to_string(d.sigma) + ") vs N(" + std::to_string(n.mu) + "," +
         std::to_string(n.sigma) + ")";
}

/// |closed form - quadrature| over random parameter draws of one family.
inline Outcome closed_form_agreement(Family f, int draws, std::uint64_t seed, QuadratureSettings q) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < draws; ++i) {
    switch (f) {
      case Family::binormal: {
        const auto d = random_normal(r), n = random_normal(r);
        o.record(std::abs(affinity_binormal(d, n) - affinity(TestPair{d, n}, q)), label(d, n));
        break;
      }
      case Family::bibeta: {
        const auto d = random_beta(r), n = random_beta(r);
        o.record(std::abs(affinity_bibeta(d, n) - affinity(TestPair{d, n}, q)),
                 "Beta(" + std::to_string(d.a) + "," + std::to_string(d.b) + ") vs Beta(" + std::to_string(n.a) +
                     "," + std::to_string(n.b) + ")");
        break;
      }
      case Family::biexponential: {
        const auto d = random_exponential(r), n = random_exponential(r);
        o.record(std::abs(affinity_biexponential(d, n) - affinity(TestPair{d, n}, q)),
                 "Exp(" + std::to_string(d.lambda) + ") vs Exp(" + std::to_string(n.lambda) + ")");
        break;
      }
    }
  }
  return o;
}

inline TestPair random_pair(Rng& r, int k) {
  switch (k % 4) {
    case 0: return {random_normal(r), random_normal(r)};
    case 1: return {random_beta(r), random_beta(r)};
    case 2: return {random_exponential(r), random_exponential(r)};
    default: {
      const double w = between(r, 0.1, 0.9);
      const Density m = MixtureModel{{w, 1 - w}, {random_normal(r), random_normal(r)}};
      return {m, random_normal(r)};
    }
  }
}

/// Largest excursion outside [0, 1] of affinity, OVL, AUC and YI.
inline Outcome bounds(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  auto excess = [](double v) { return std::max({0.0, -v, v - 1.0, std::isfinite(v) ? 0.0 : INFINITY}); };
  for (int i = 0; i < pairs; ++i) {
    const auto p = random_pair(r, i);
    const std::string at = "pair " + std::to_string(i);
    o.record(excess(affinity(p)), at + " affinity");
    o.record(excess(ovl(p)), at + " ovl");
    o.record(excess(auc(p, TestDirection::upper_tailed)), at + " auc");
    o.record(excess(youden(p, TestDirection::upper_tailed, 1000).yi), at + " yi");
  }
  return o;
}

/// affinity(d, nd) vs affinity(nd, d), and auc(upper, swapped) vs auc(lower).
inline Outcome symmetry(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < pairs; ++i) {
    const auto p = random_pair(r, i);
    const TestPair s{p.healthy, p.diseased};
    o.record(std::abs(affinity(p) - affinity(s)), "affinity swap, pair " + std::to_string(i));
    o.record(std::abs(auc(s, TestDirection::upper_tailed) - auc(p, TestDirection::lower_tailed)),
             "auc direction, pair " + std::to_string(i));
  }
  return o;
}

/// |auc(upper) + auc(lower) - 1|. The two directions integrate different
/// products, so this carries the quadrature error, including mass within one
/// ulp of a singular beta endpoint.
inline Outcome complement(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < pairs; ++i) {
    const auto p = random_pair(r, i);
    o.record(std::abs(auc(p, TestDirection::upper_tailed) + auc(p, TestDirection::lower_tailed) - 1.0),
             "auc complement, pair " + std::to_string(i));
  }
  return o;
}

/// Reversing the direction of the marker (y -> -y for normals, y -> 1 - y
/// for betas) keeps affinity and turns the upper-tailed AUC into the
/// lower-tailed one.
inline Outcome direction_invariance(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < pairs; ++i) {
    TestPair p{NormalParams{0, 1}, NormalParams{0, 1}}, flipped = p;
    if (i % 2 == 0) {
      const auto d = random_normal(r), n = random_normal(r);
      p = {d, n};
      flipped = {NormalParams{-d.mu, d.sigma}, NormalParams{-n.mu, n.sigma}};
    } else {
      const auto d = random_beta(r), n = random_beta(r);
      p = {d, n};
      flipped = {BetaParams{d.b, d.a}, BetaParams{n.b, n.a}};
    }
    const std::string at = "pair " + std::to_string(i);
    o.record(std::abs(affinity(p) - affinity(flipped)), at + " affinity");
    o.record(std::abs(auc(p, TestDirection::upper_tailed) - auc(flipped, TestDirection::lower_tailed)), at + " auc");
  }
  return o;
}

/// max(0, ovl - affinity).
inline Outcome ovl_dominance(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < pairs; ++i) {
    const auto p = random_pair(r, i);
    o.record(std::max(0.0, ovl(p) - affinity(p)), "pair " + std::to_string(i));
  }
  return o;
}

/// Affinity and AUC of binormal pairs against their push-forwards under
/// exp (lognormal, integrated by quadrature in the transformed space) and
/// positive affine maps.
inline Outcome transform_invariance(int pairs, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int i = 0; i < pairs; ++i) {
    const NormalParams d{between(r, -1, 1), between(r, 0.2, 0.5)};
    const NormalParams n{between(r, -1, 1), between(r, 0.2, 0.5)};
    const TestPair base{d, n};
    const double k0 = affinity(base);
    const double a0 = auc(base, TestDirection::upper_tailed);

    auto lognormal = [](NormalParams p) {
      return [p](double y) { return y <= 0.0 ? 0.0 : oracle::phi(std::log(y), p.mu, p.sigma) / y; };
    };
    const double upper = std::exp(std::max(d.mu + 10 * d.sigma, n.mu + 10 * n.sigma));
    QuadratureSpec spec{0.0, upper, 1 << 17, QuadratureRule::gauss_legendre};
    const double k1 = affinity(lognormal(d), lognormal(n), spec);
    const double a1 = auc(lognormal(d), lognormal(n), TestDirection::upper_tailed, spec);
    o.record(std::abs(k1 - k0), "exp, kappa, " + label(d, n));
    o.record(std::abs(a1 - a0), "exp, auc, " + label(d, n));

    const double a = between(r, 0.2, 5), b = between(r, -5, 5);
    const TestPair moved{NormalParams{a * d.mu + b, a * d.sigma}, NormalParams{a * n.mu + b, a * n.sigma}};
    o.record(std::abs(affinity(moved) - k0), "affine, kappa, " + label(d, n));
    o.record(std::abs(auc(moved, TestDirection::upper_tailed) - a0), "affine, auc, " + label(d, n));
  }
  return o;
}

/// |MC - quadrature| in units of the MC standard error.
inline double lr_identity_z(const TestPair& p, std::size_t n, std::uint64_t seed) {
  const auto c = affinity_lr_identity_check(p, n, seed);
  return std::abs(c.mc_estimate - c.quad_value) / c.mc_std_error;
}

}  // namespace props
