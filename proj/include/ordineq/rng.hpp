#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

#include "ordineq/errors.hpp"

namespace ordineq {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Substream seed for (base, key). The mapping is pure, so draw m of a run
/// can be generated in any order, on any thread, with identical output.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
  return mix64(base + (key + 1) * kGoldenGamma);
}

/// FNV-1a, used to key group substreams by name.
inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// A seeded stream of variates. The engine (std::mt19937_64) and every
/// transform below are fully pinned down, so a given seed yields the same
/// sequence on every platform and standard library.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  /// Gamma(shape) with unit scale, Marsaglia-Tsang squeeze. Shapes below 1
  /// go through the boosting identity G(a) = G(a+1) * U^(1/a).
  double gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma: shape must be positive");
    if (shape < 1.0) {
      const double boost = std::pow(uniform(), 1.0 / shape);
      return boost * gamma(shape + 1.0);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// One draw from Dirichlet(concentration): independent gammas normalized
  /// by their sum. Coordinates can underflow to exact zero for very small
  /// concentrations; an all-zero total (possible only in that regime) is
  /// redrawn.
  Eigen::VectorXd dirichlet(const Eigen::Ref<const Eigen::VectorXd>& concentration) {
    const Eigen::Index n = concentration.size();
    if (n < 1) throw DimensionError("dirichlet: empty concentration vector");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(concentration(i) > 0.0))
        throw DomainError("dirichlet: concentration parameters must be positive");
    }
    Eigen::VectorXd g(n);
    double total = 0.0;
    do {
      for (Eigen::Index i = 0; i < n; ++i) g(i) = gamma(concentration(i));
      total = g.sum();
    } while (total == 0.0);
    return g / total;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace ordineq
