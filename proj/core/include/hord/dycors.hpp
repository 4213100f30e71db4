#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <vector>

#include "hord/domain.hpp"
#include "hord/rng.hpp"

namespace hord {

inline constexpr double kSigma2Init = 0.2;
inline constexpr double kSigma2Min = 0.005;
inline constexpr double kSigma2Max = 0.2;
inline constexpr int kSuccessThreshold = 3;
inline constexpr std::array<double, 4> kWeightCycle = {0.3, 0.5, 0.8, 0.95};

// Mutable state of the adaptive search loop.
struct SearchState {
  double sigma2 = kSigma2Init;  // perturbation variance, in [0.005, 0.2]
  int fail_streak = 0;          // consecutive iterations without improvement
  int success_streak = 0;       // consecutive improving iterations
  int weight_index = 0;         // position in the weight cycle
  int n = 0;                    // completed objective evaluations
  int n0 = 0;                   // initial design size (ISP included)
  int n_max = 0;                // total evaluation budget
  double phi0 = 1.0;            // min(20/D, 1)
  int m = 0;                    // candidates per iteration
  int t_fail = 5;               // failures before sigma2 halves, max(5, D)

  static SearchState make(int dim, int n0, int n_max, double sigma2_init,
                          int m);
};

// Fraction of coordinates perturbed at evaluation count n:
//
//   phi_n = phi0 * [1 - ln(n - n0 + 1) / ln(n_max - n0)]
//
// clamped to [0, 1]; equals phi0 at n = n0 and 0 at n = n_max - 1.
// BudgetExhausted when n >= n_max.
double perturbation_probability(const SearchState& s);

struct Candidate {
  Eigen::VectorXd point;        // internal coordinates
  double surrogate_value = 0.0;
  double min_distance = 0.0;    // to the evaluated set
  double v_ev = 0.0;            // surrogate score in [0,1], lower is better
  double v_dm = 0.0;            // distance score in [0,1], lower is farther
  double score = 0.0;           // w * v_ev + (1-w) * v_dm
};

struct CandidateSet {
  std::vector<Candidate> candidates;  // survivors of the duplicate filter
  int generated = 0;                  // points built before filtering
};

// Perturbs x_best coordinate-wise: each coordinate is marked with
// probability phi_n (at least one, forced uniformly when none), marked
// coordinates get N(0, sigma2) noise, results are clamped to [0,1] and
// integer coordinates snapped to their grid. Candidates closer than d_tol
// to any row of history_points (x_best among them) are discarded without
// replacement; NoCandidates when nothing survives.
CandidateSet generate_candidates(const SearchState& s, const Domain& domain,
                                 const Eigen::VectorXd& x_best,
                                 const Eigen::MatrixXd& history_points,
                                 double d_tol, Rng& rng);

// Ablation variant: candidates drawn uniformly over [0,1]^D instead of by
// perturbation; snapping and the duplicate filter are identical.
CandidateSet generate_candidates_uniform(const SearchState& s,
                                         const Domain& domain,
                                         const Eigen::MatrixXd& history_points,
                                         double d_tol, Rng& rng);

// Fills surrogate_value, min_distance, v_ev, v_dm and score:
//
//   v_ev = (S - s_min) / (s_max - s_min), or 1 for a flat surrogate batch
//   v_dm = (d_max - d) / (d_max - d_min), or 1 when all distances tie
//   score = w * v_ev + (1 - w) * v_dm
//
// Distances are to history_points. EmptyCandidateSet on empty input.
void score_candidates(std::vector<Candidate>& candidates,
                      const Eigen::VectorXd& surrogate_values,
                      const Eigen::MatrixXd& history_points, double w);

// Index of the minimum score; ties resolve to the lowest index.
std::size_t select_next(const std::vector<Candidate>& candidates);

// Returns the weight for this iteration and steps the cycle
// 0.3, 0.5, 0.8, 0.95, 0.3, ...
double advance_weight(SearchState& s);

// Streak bookkeeping after one adaptive evaluation: the opposing streak
// resets; t_fail consecutive failures halve sigma2 (floor 0.005), three
// consecutive improvements double it (cap 0.2), and a streak that fires
// resets itself.
void adjust_variance(SearchState& s, bool improved);

}  // namespace hord
