#include "hord/dycors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hord/errors.hpp"

namespace hord {

SearchState SearchState::make(int dim, int n0, int n_max, double sigma2_init,
                              int m) {
  if (dim < 1) throw std::invalid_argument("SearchState: dim must be >= 1");
  SearchState s;
  s.sigma2 = sigma2_init;
  s.n = n0;
  s.n0 = n0;
  s.n_max = n_max;
  s.phi0 = std::min(20.0 / dim, 1.0);
  s.m = m;
  s.t_fail = std::max(5, dim);
  return s;
}

double perturbation_probability(const SearchState& s) {
  if (s.n >= s.n_max) {
    std::ostringstream msg;
    msg << "n = " << s.n << " has reached the budget n_max = " << s.n_max;
    raise(Errc::BudgetExhausted, msg.str());
  }
  if (s.n < s.n0 || s.n_max - s.n0 < 2) {
    throw std::invalid_argument("perturbation_probability: need n0 <= n and n_max >= n0 + 2");
  }
  const double decay = std::log(static_cast<double>(s.n - s.n0 + 1)) /
                       std::log(static_cast<double>(s.n_max - s.n0));
  return std::clamp(s.phi0 * (1.0 - decay), 0.0, 1.0);
}

namespace {

double min_distance_to(const Eigen::MatrixXd& points, const Eigen::VectorXd& x) {
  if (points.rows() == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(
      (points.rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff());
}

}  // namespace

CandidateSet generate_candidates(const SearchState& s, const Domain& domain,
                                 const Eigen::VectorXd& x_best,
                                 const Eigen::MatrixXd& history_points,
                                 double d_tol, Rng& rng) {
  const int dim = domain.dimension();
  if (x_best.size() != dim) {
    throw std::invalid_argument("generate_candidates: x_best has wrong dimension");
  }
  const double phi = perturbation_probability(s);

  CandidateSet out;
  out.generated = s.m;
  out.candidates.reserve(static_cast<std::size_t>(s.m));
  std::vector<int> marked;
  marked.reserve(static_cast<std::size_t>(dim));

  for (int j = 0; j < s.m; ++j) {
    // Mark coordinates in index order so the draw sequence is fixed.
    marked.clear();
    for (int i = 0; i < dim; ++i) {
      if (rng.uniform01() < phi) marked.push_back(i);
    }
    if (marked.empty()) {
      marked.push_back(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dim))));
    }
    Eigen::VectorXd y = x_best;
    for (const int i : marked) {
      y[i] = std::clamp(y[i] + rng.normal(0.0, s.sigma2), 0.0, 1.0);
    }
    y = domain.snap_integer_coords(y);
    // Discard anything indistinguishable from an evaluated point (x_best is
    // one of them); no replacement draws.
    if (min_distance_to(history_points, y) < d_tol) continue;
    if ((y - x_best).norm() < d_tol) continue;
    Candidate c;
    c.point = std::move(y);
    out.candidates.push_back(std::move(c));
  }
  if (out.candidates.empty()) {
    raise(Errc::NoCandidates, "every perturbed candidate was discarded");
  }
  return out;
}

CandidateSet generate_candidates_uniform(const SearchState& s,
                                         const Domain& domain,
                                         const Eigen::MatrixXd& history_points,
                                         double d_tol, Rng& rng) {
  const int dim = domain.dimension();
  CandidateSet out;
  out.generated = s.m;
  out.candidates.reserve(static_cast<std::size_t>(s.m));
  for (int j = 0; j < s.m; ++j) {
    Eigen::VectorXd y(dim);
    for (int i = 0; i < dim; ++i) y[i] = rng.uniform01();
    y = domain.snap_integer_coords(y);
    if (min_distance_to(history_points, y) < d_tol) continue;
    Candidate c;
    c.point = std::move(y);
    out.candidates.push_back(std::move(c));
  }
  if (out.candidates.empty()) {
    raise(Errc::NoCandidates, "every uniform candidate was discarded");
  }
  return out;
}

void score_candidates(std::vector<Candidate>& candidates,
                      const Eigen::VectorXd& surrogate_values,
                      const Eigen::MatrixXd& history_points, double w) {
  if (candidates.empty()) {
    raise(Errc::EmptyCandidateSet, "no candidates to score");
  }
  if (surrogate_values.size() != static_cast<Eigen::Index>(candidates.size())) {
    throw std::invalid_argument("score_candidates: surrogate value count mismatch");
  }
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("score_candidates: w must lie in [0, 1]");
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].surrogate_value = surrogate_values[static_cast<Eigen::Index>(i)];
    candidates[i].min_distance = min_distance_to(history_points, candidates[i].point);
  }

  const double s_min = surrogate_values.minCoeff();
  const double s_max = surrogate_values.maxCoeff();
  double d_min = candidates.front().min_distance;
  double d_max = d_min;
  for (const Candidate& c : candidates) {
    d_min = std::min(d_min, c.min_distance);
    d_max = std::max(d_max, c.min_distance);
  }

  for (Candidate& c : candidates) {
    c.v_ev = (s_max != s_min) ? (c.surrogate_value - s_min) / (s_max - s_min) : 1.0;
    c.v_dm = (d_max != d_min) ? (d_max - c.min_distance) / (d_max - d_min) : 1.0;
    c.score = w * c.v_ev + (1.0 - w) * c.v_dm;
  }
}

std::size_t select_next(const std::vector<Candidate>& candidates) {
  if (candidates.empty()) {
    raise(Errc::EmptyCandidateSet, "no candidates to select from");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].score < candidates[best].score) best = i;  // ties keep the earlier index
  }
  return best;
}

double advance_weight(SearchState& s) {
  const double w = kWeightCycle[static_cast<std::size_t>(s.weight_index)];
  s.weight_index = (s.weight_index + 1) % static_cast<int>(kWeightCycle.size());
  return w;
}

void adjust_variance(SearchState& s, bool improved) {
  if (improved) {
    s.fail_streak = 0;
    if (++s.success_streak >= kSuccessThreshold) {
      s.sigma2 = std::min(2.0 * s.sigma2, kSigma2Max);
      s.success_streak = 0;
    }
  } else {
    s.success_streak = 0;
    if (++s.fail_streak >= s.t_fail) {
      s.sigma2 = std::max(s.sigma2 / 2.0, kSigma2Min);
      s.fail_streak = 0;
    }
  }
}

}  // namespace hord
