#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "hord/domain.hpp"
#include "hord/dycors.hpp"
#include "hord/evaluator.hpp"
#include "hord/trace.hpp"

namespace hord {

enum class Termination { BudgetExhausted, EvaluatorFailure, Stalled };
const char* termination_name(Termination t);

// How an adaptive iteration proposes candidates. IncumbentPerturbation is
// the real algorithm; Uniform backs the ablation baseline and reuses every
// other code path (surrogate, scoring, selection, variance bookkeeping).
enum class CandidateStrategy { IncumbentPerturbation, Uniform };

struct RunConfig {
  Domain domain;
  EvaluatorSpec evaluator;
  int n_max = 200;               // total evaluation budget, ISP included
  std::uint64_t seed = 0;
  std::optional<int> n0;         // initial design size, default 2(D+1)
  std::optional<int> m;          // candidates per iteration, default 100*D
  double d_tol = 1e-3;           // duplicate tolerance, internal units
  double sigma2_init = kSigma2Init;
  std::optional<ExternalPoint> isp;  // evaluated first when present

  // Overrides the evaluator spec when set; lets library callers plug in an
  // arbitrary objective. Must be stateless/deterministic for replay.
  std::shared_ptr<Evaluator> custom_evaluator;

  int effective_n0() const;
  int effective_m() const;
  void validate() const;  // ConfigInvalid
};

struct RunResult {
  ExternalPoint x_best;
  double f_best = 0.0;
  Trace trace;
  Termination termination = Termination::BudgetExhausted;
  RunConfig config;  // as executed; resume() rebuilds from it
  CandidateStrategy strategy = CandidateStrategy::IncumbentPerturbation;
};

// One full surrogate optimization run: optional initial point, Latin
// hypercube design, then adaptive iterations (fit, perturb, score, evaluate,
// adjust) until the budget is spent. A failed evaluation is retried once;
// failing again ends the run with Termination::EvaluatorFailure and the
// trace collected so far. Two empty candidate batches in a row (second one
// with doubled variance) end it as Stalled.
RunResult run(const RunConfig& config);

RunResult run_with_strategy(const RunConfig& config, CandidateStrategy strategy);

// Extends a finished run as if it had been launched with budget
// n_max + extra_budget: the loop is re-simulated from the seed, objective
// values for points already in the trace are reused bit-exactly, and only
// points the longer schedule selects anew reach the evaluator. With
// extra_budget == 0 this reproduces the run unchanged, and after an
// EvaluatorFailure it retries the failed evaluation. CorruptTrace when the
// prior trace is inconsistent.
RunResult resume(const RunResult& prior, int extra_budget);

}  // namespace hord
