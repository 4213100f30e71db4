#pragma once

// Shared internals of run()/resume() and the surrogate baseline; not part of
// the installed interface.

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "hord/optimizer.hpp"

namespace hord::detail {

struct CachedEvaluation {
  double f = 0.0;
  double wall_time = 0.0;
};

// Keyed on the exact bit pattern of the internal point, so only a replay
// that reproduces the arithmetic exactly gets cache hits.
using EvalCache = std::unordered_map<std::string, CachedEvaluation>;

std::string point_key(const Eigen::VectorXd& point);

// One evaluation with a single retry on transient evaluator errors. The
// evaluator is obtained through `get` on each attempt, so a child that fails
// to start is handled exactly like one that fails mid-run. Returns nothing
// when the retry also failed; non-transient errors propagate.
std::optional<CachedEvaluation> evaluate_with_retry(
    const std::function<Evaluator&()>& get, const ExternalPoint& point);

RunResult run_impl(const RunConfig& config, CandidateStrategy strategy,
                   const EvalCache& cache);

}  // namespace hord::detail
