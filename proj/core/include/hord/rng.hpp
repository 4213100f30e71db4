#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

namespace hord {

// Deterministic random source. The engine is std::mt19937_64, whose output
// stream is fixed by the C++ standard, and every mapping from raw 64-bit
// words to doubles or integers is spelled out here instead of going through
// the <random> distribution adaptors (those are free to differ between
// standard libraries, which would break seed-for-seed reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform on [0, 1) with 53-bit resolution: top 53 bits scaled by 2^-53.
  double uniform01();

  // Uniform on {0, ..., bound-1} by masked rejection (no modulo bias).
  std::uint64_t uniform_int(std::uint64_t bound);

  // N(mean, variance) via Box-Muller; consumes exactly two uniforms per
  // draw and keeps no cached state so replay never depends on call parity.
  // variance == 0 returns mean; variance < 0 raises NegativeVariance.
  double normal(double mean, double variance);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// Latin hypercube design: n points in [0,1)^dim such that for every
// dimension each stratum [k/n, (k+1)/n) holds exactly one point, with an
// independent random stratum permutation per dimension and points placed
// uniformly inside their stratum. Draw order is dimension-major: for each
// dimension first a Fisher-Yates shuffle, then n jitter values.
std::vector<Eigen::VectorXd> latin_hypercube(int n, int dim, Rng& rng);

}  // namespace hord
