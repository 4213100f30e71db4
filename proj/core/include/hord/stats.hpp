#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hord/trace.hpp"

namespace hord {

// Two-sided Wilcoxon-Mann-Whitney rank-sum p-value for independent samples
// (each of size >= 2). Exact by enumeration of all C(n_a+n_b, n_a) group
// assignments when n_a + n_b <= 12, otherwise the normal approximation with
// continuity correction and the tie correction to the variance. Samples
// that are identical across both groups give p = 1.
double rank_sum_test(std::span<const double> a, std::span<const double> b);

// Smallest evaluation number whose best-so-far value is <= target; empty
// when the run never reaches it.
std::optional<int> evaluations_to_target(const Trace& trace, double target);

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);  // n-1 denominator, 0 for n<2
double median(std::vector<double> xs);          // by value: needs a sort

}  // namespace hord
