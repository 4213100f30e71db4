#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hord/optimizer.hpp"

namespace hord {

enum class Algorithm { Hord, HordIsp, Random, RbfUniform };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& text);  // ConfigInvalid

// A multi-trial benchmark: the listed algorithms each run `trials` times on
// the same objective, trial k using seed base_seed + k.
struct StudyConfig {
  Domain domain;
  EvaluatorSpec evaluator;
  std::vector<Algorithm> algorithms = {Algorithm::Hord};
  int trials = 5;
  int n_max = 200;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "hord_study";
  std::optional<int> n0;
  std::optional<int> m;
  double d_tol = 1e-3;
  double sigma2_init = kSigma2Init;
  std::optional<ExternalPoint> isp;     // required by hord-isp
  std::optional<double> target;         // enables evaluations-to-target

  void validate() const;  // ConfigInvalid
  RunConfig run_config(Algorithm algorithm, int trial) const;
};

struct AlgorithmSummary {
  std::string algorithm;
  int trials = 0;
  std::vector<double> final_best;                  // per trial
  double mean_best_f = 0.0;
  double std_best_f = 0.0;
  double median_best_f = 0.0;
  std::vector<double> mean_curve;                  // best-so-far, length n_max
  std::vector<double> std_curve;
  std::vector<std::optional<int>> evals_to_target; // per trial, when target set
  std::vector<std::string> terminations;           // per trial
};

struct StudySummary {
  int n_max = 0;
  int trials = 0;
  std::optional<double> target;
  std::vector<AlgorithmSummary> algorithms;
  std::map<std::string, double> rank_sum_p;  // "<a>_vs_<b>" -> two-sided p
  bool evaluator_failed = false;             // any run ended EvaluatorFailure
};

// Runs every (algorithm, trial) pair, writes one JSONL trace per run plus
// summary.json and curves.csv under cfg.out_dir, and returns the summary.
// Trace files survive later failures (partial results are kept on disk).
StudySummary run_study(const StudyConfig& cfg);

// Rebuilds the summary purely from the trace files in a study directory.
StudySummary summarize_traces(const std::filesystem::path& dir,
                              std::optional<double> target = std::nullopt);

void write_summary_files(const StudySummary& summary,
                         const std::filesystem::path& dir);

std::string summary_to_json(const StudySummary& summary);
std::string curves_to_csv(const StudySummary& summary);

// Trace filename for one run, "<algorithm>__trial<k>.jsonl".
std::string trace_filename(Algorithm algorithm, int trial);

// Uniform random search under the identical budget/trace contract:
// integers uniform on their grid, duplicates redrawn.
RunResult baseline_random(const RunConfig& config);

// The full surrogate loop with uniformly drawn candidates; every scoring
// and bookkeeping path is shared with run().
RunResult baseline_rbf_uniform(const RunConfig& config);

}  // namespace hord
