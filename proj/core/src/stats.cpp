#include "hord/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace hord {

namespace {

// Mann-Whitney U for group a against group b, ties counted half.
double u_statistic(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (const double x : a) {
    for (const double y : b) {
      if (x > y) u += 1.0;
      else if (x == y) u += 0.5;
    }
  }
  return u;
}

// Exact two-sided p by enumerating every split of the pooled sample into a
// group of size |a|; under the null each split is equally likely.
double exact_p(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const int n = static_cast<int>(pooled.size());
  const int k = static_cast<int>(a.size());
  const double u_obs = u_statistic(a, b);

  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;

  long total = 0;
  long count_le = 0;
  long count_ge = 0;
  std::vector<double> ga(static_cast<std::size_t>(k));
  std::vector<double> gb(static_cast<std::size_t>(n - k));
  const double eps = 1e-12;
  for (;;) {
    std::size_t ai = 0;
    std::size_t bi = 0;
    std::size_t next = 0;
    for (int i = 0; i < n; ++i) {
      if (next < idx.size() && idx[next] == i) {
        ga[ai++] = pooled[static_cast<std::size_t>(i)];
        ++next;
      } else {
        gb[bi++] = pooled[static_cast<std::size_t>(i)];
      }
    }
    const double u = u_statistic(ga, gb);
    ++total;
    if (u <= u_obs + eps) ++count_le;
    if (u >= u_obs - eps) ++count_ge;

    // Advance to the next k-combination of {0..n-1}.
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }

  const double tail = std::min(count_le, count_ge) / static_cast<double>(total);
  return std::min(1.0, 2.0 * tail);
}

// Large-sample normal approximation with continuity correction and the tie
// correction to the variance.
double approx_p(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double u = u_statistic(a, b);
  const double mean_u = na * nb / 2.0;

  std::map<double, int> tie_groups;
  for (const double x : a) ++tie_groups[x];
  for (const double y : b) ++tie_groups[y];
  double tie_term = 0.0;
  for (const auto& [value, count] : tie_groups) {
    (void)value;
    const double t = count;
    tie_term += t * t * t - t;
  }
  const double var_u =
      na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var_u > 0.0)) return 1.0;  // everything tied

  double z = u - mean_u;
  if (z > 0.5) z -= 0.5;
  else if (z < -0.5) z += 0.5;
  else z = 0.0;
  z /= std::sqrt(var_u);
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

}  // namespace

double rank_sum_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("rank_sum_test: both samples need size >= 2");
  }
  const double first = a.front();
  bool all_equal = true;
  for (const double x : a) all_equal = all_equal && x == first;
  for (const double y : b) all_equal = all_equal && y == first;
  if (all_equal) return 1.0;  // degenerate: no evidence either way

  if (a.size() + b.size() <= 12) return exact_p(a, b);
  return approx_p(a, b);
}

std::optional<int> evaluations_to_target(const Trace& trace, double target) {
  for (const TraceRecord& r : trace) {
    if (r.best_f_so_far <= target) return r.n;
  }
  return std::nullopt;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double sum = 0.0;
  for (const double x : xs) sum += (x - m) * (x - m);
  return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace hord
