#include "hord/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "hord/errors.hpp"

namespace hord {

Rng::Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

double Rng::uniform01() {
  // 53 significant bits, exactly representable, in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_int: bound must be positive");
  }
  // Smallest all-ones mask covering bound-1, then rejection sampling.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t v = engine_() & mask;
    if (v < bound) return v;
  }
}

double Rng::normal(double mean, double variance) {
  if (variance < 0.0) {
    raise(Errc::NegativeVariance, "normal draw with variance < 0");
  }
  if (variance == 0.0) return mean;
  // Box-Muller, cosine branch only. u1 is shifted into (0, 1] so the log is
  // finite; the sine companion is deliberately dropped to keep a fixed
  // two-uniforms-per-draw consumption pattern.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double z = radius * std::cos(2.0 * std::numbers::pi * u2);
  return mean + std::sqrt(variance) * z;
}

std::vector<Eigen::VectorXd> latin_hypercube(int n, int dim, Rng& rng) {
  if (n < 1 || dim < 1) {
    throw std::invalid_argument("latin_hypercube: n and dim must be >= 1");
  }
  std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(n),
                                      Eigen::VectorXd(dim));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int d = 0; d < dim; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(
          rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < n; ++i) {
      points[static_cast<std::size_t>(i)][d] =
          (perm[static_cast<std::size_t>(i)] + rng.uniform01()) / n;
    }
  }
  return points;
}

}  // namespace hord
