#include "hord/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hord/rbf.hpp"
#include "hord/rng.hpp"
#include "run_impl.hpp"

namespace hord {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::EvaluatorFailure: return "evaluator_failure";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

int RunConfig::effective_n0() const {
  return n0.value_or(2 * (domain.dimension() + 1));
}

int RunConfig::effective_m() const { return m.value_or(100 * domain.dimension()); }

void RunConfig::validate() const {
  const int dim = domain.dimension();
  if (n_max < 1) raise(Errc::ConfigInvalid, "n_max must be at least 1");
  if (effective_m() < 1) raise(Errc::ConfigInvalid, "m must be at least 1");
  if (!(d_tol > 0.0)) raise(Errc::ConfigInvalid, "d_tol must be positive");
  if (!(sigma2_init >= kSigma2Min && sigma2_init <= kSigma2Max)) {
    std::ostringstream msg;
    msg << "sigma2_init must lie in [" << kSigma2Min << ", " << kSigma2Max << "]";
    raise(Errc::ConfigInvalid, msg.str());
  }
  if (effective_n0() < dim + 1) {
    raise(Errc::ConfigInvalid, "initial design needs at least D+1 points");
  }
  // The budget must leave room for the whole initial design (ISP included)
  // plus at least one adaptive evaluation, and the schedule needs
  // n_max - n0 >= 2.
  const int design_total = effective_n0() + (isp ? 1 : 0);
  if (n_max <= design_total + 1) {
    std::ostringstream msg;
    msg << "n_max = " << n_max << " leaves no adaptive budget after the "
        << design_total << " design evaluations";
    raise(Errc::ConfigInvalid, msg.str());
  }
  if (isp) domain.validate_point(*isp);
  if (!custom_evaluator) evaluator.validate();
}

namespace detail {

std::string point_key(const Eigen::VectorXd& point) {
  return {reinterpret_cast<const char*>(point.data()),
          sizeof(double) * static_cast<std::size_t>(point.size())};
}

namespace {

bool retryable(const Error& e) {
  switch (e.code()) {
    case Errc::Timeout:
    case Errc::ProtocolError:
    case Errc::NonFiniteValue:
    case Errc::ChildCrashed:
    case Errc::EvaluationError:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<CachedEvaluation> evaluate_with_retry(
    const std::function<Evaluator&()>& get, const ExternalPoint& point) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      CachedEvaluation out;
      out.f = get().evaluate(point);
      out.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      return out;
    } catch (const Error& e) {
      if (!retryable(e) || attempt == 1) return std::nullopt;
    }
  }
  return std::nullopt;
}

RunResult run_impl(const RunConfig& config, CandidateStrategy strategy,
                   const EvalCache& cache) {
  config.validate();
  const Domain& domain = config.domain;
  const int dim = domain.dimension();

  Rng rng(config.seed);
  EvaluationHistory history(config.d_tol);
  Trace trace;

  // The child (or builtin) is only materialized for the first evaluation the
  // cache cannot answer, so a fully cached replay spawns nothing.
  std::unique_ptr<Evaluator> owned;
  auto evaluator = [&]() -> Evaluator& {
    if (config.custom_evaluator) return *config.custom_evaluator;
    if (!owned) owned = make_evaluator(config.evaluator, domain);
    return *owned;
  };

  // Evaluates one point (one automatic retry on failure), appends history
  // and trace. Returns false when the second attempt also failed.
  auto evaluate_and_record = [&](const Eigen::VectorXd& point, Phase phase,
                                 std::optional<double> sigma2,
                                 std::optional<double> phi,
                                 std::optional<double> weight,
                                 std::optional<int> generated,
                                 std::optional<int> surviving) -> bool {
    const ExternalPoint external = domain.denormalize(point);
    double f = 0.0;
    double wall = 0.0;
    const auto hit = cache.find(point_key(point));
    if (hit != cache.end()) {
      f = hit->second.f;
      wall = hit->second.wall_time;
    } else {
      const auto outcome = evaluate_with_retry(evaluator, external);
      if (!outcome) return false;
      f = outcome->f;
      wall = outcome->wall_time;
    }

    EvaluationRecord er;
    er.point = point;
    er.point_external = external;
    er.value = f;
    er.phase = phase;
    er.wall_time = wall;
    history.record(std::move(er));

    TraceRecord tr;
    tr.n = static_cast<int>(history.size());
    tr.phase = phase;
    tr.point = point;
    tr.point_external = external;
    tr.f = f;
    tr.best_f_so_far = history.best_value();
    tr.sigma2 = sigma2;
    tr.phi_n = phi;
    tr.weight_w = weight;
    tr.candidates_generated = generated;
    tr.candidates_surviving = surviving;
    tr.wall_time = wall;
    trace.push_back(std::move(tr));
    return true;
  };

  Termination termination = Termination::BudgetExhausted;
  bool failed = false;

  // Phase 1: the supplied starting point first, then the Latin hypercube
  // design (filtered against anything already evaluated once integer
  // coordinates snap onto their grid).
  if (config.isp) {
    const Eigen::VectorXd y =
        domain.snap_integer_coords(domain.normalize(*config.isp));
    failed = !evaluate_and_record(y, Phase::Isp, config.sigma2_init, std::nullopt,
                                  std::nullopt, std::nullopt, std::nullopt);
  }
  if (!failed) {
    for (const Eigen::VectorXd& p :
         latin_hypercube(config.effective_n0(), dim, rng)) {
      if (static_cast<int>(history.size()) >= config.n_max) break;
      const Eigen::VectorXd y = domain.snap_integer_coords(p);
      if (history.min_distance(y) < config.d_tol) continue;
      if (!evaluate_and_record(y, Phase::InitialDesign, config.sigma2_init,
                               std::nullopt, std::nullopt, std::nullopt,
                               std::nullopt)) {
        failed = true;
        break;
      }
    }
  }

  // Phase 2: adaptive loop. Every completed evaluation counts against n_max
  // no matter which phase produced it.
  if (!failed) {
    SearchState state =
        SearchState::make(dim, static_cast<int>(history.size()), config.n_max,
                          config.sigma2_init, config.effective_m());
    while (static_cast<int>(history.size()) < config.n_max) {
      state.n = static_cast<int>(history.size());

      const Eigen::MatrixXd points = history.points_matrix();
      const RbfModel model = RbfModel::fit({points, history.values_vector()});
      const Eigen::VectorXd x_best = history.best().point;
      const double f_incumbent = history.best_value();

      const double phi = perturbation_probability(state);
      const double weight = advance_weight(state);
      const double sigma2_used = state.sigma2;

      CandidateSet batch;
      bool have_candidates = false;
      try {
        batch = strategy == CandidateStrategy::IncumbentPerturbation
                    ? generate_candidates(state, domain, x_best, points,
                                          config.d_tol, rng)
                    : generate_candidates_uniform(state, domain, points,
                                                  config.d_tol, rng);
        have_candidates = true;
      } catch (const Error& e) {
        if (e.code() != Errc::NoCandidates) throw;
        // One more attempt with doubled variance before giving up.
        SearchState boosted = state;
        boosted.sigma2 *= 2.0;
        try {
          batch = strategy == CandidateStrategy::IncumbentPerturbation
                      ? generate_candidates(boosted, domain, x_best, points,
                                            config.d_tol, rng)
                      : generate_candidates_uniform(boosted, domain, points,
                                                    config.d_tol, rng);
          have_candidates = true;
        } catch (const Error& e2) {
          if (e2.code() != Errc::NoCandidates) throw;
        }
      }
      if (!have_candidates) {
        termination = Termination::Stalled;
        break;
      }

      Eigen::MatrixXd queries(static_cast<Eigen::Index>(batch.candidates.size()),
                              dim);
      for (std::size_t i = 0; i < batch.candidates.size(); ++i) {
        queries.row(static_cast<Eigen::Index>(i)) =
            batch.candidates[i].point.transpose();
      }
      score_candidates(batch.candidates, model.predict_batch(queries), points,
                       weight);
      const Eigen::VectorXd chosen =
          batch.candidates[select_next(batch.candidates)].point;

      if (!evaluate_and_record(chosen, Phase::Adaptive, sigma2_used, phi, weight,
                               batch.generated,
                               static_cast<int>(batch.candidates.size()))) {
        failed = true;
        break;
      }
      adjust_variance(state, trace.back().f < f_incumbent);
    }
  }
  if (failed) termination = Termination::EvaluatorFailure;

  RunResult result;
  result.trace = std::move(trace);
  result.termination = termination;
  result.config = config;
  result.strategy = strategy;
  if (!history.empty()) {
    result.x_best = history.best().point_external;
    result.f_best = history.best_value();
  } else {
    result.f_best = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace detail

RunResult run(const RunConfig& config) {
  return detail::run_impl(config, CandidateStrategy::IncumbentPerturbation, {});
}

RunResult run_with_strategy(const RunConfig& config, CandidateStrategy strategy) {
  return detail::run_impl(config, strategy, {});
}

RunResult resume(const RunResult& prior, int extra_budget) {
  if (extra_budget < 0) {
    throw std::invalid_argument("resume: extra_budget must be >= 0");
  }
  // The prior trace must look like something run() produced before its
  // values are trusted as cached objective evaluations.
  double best = std::numeric_limits<double>::infinity();
  int expected_n = 1;
  for (const TraceRecord& r : prior.trace) {
    if (r.n != expected_n++) {
      raise(Errc::CorruptTrace, "trace evaluation numbers are not sequential");
    }
    if (!std::isfinite(r.f)) {
      raise(Errc::CorruptTrace, "trace holds a non-finite objective value");
    }
    if (r.point.size() != prior.config.domain.dimension()) {
      raise(Errc::CorruptTrace, "trace point dimension mismatch");
    }
    best = std::min(best, r.f);
    if (r.best_f_so_far != best) {
      raise(Errc::CorruptTrace, "best_f_so_far is inconsistent with the values");
    }
  }

  RunConfig config = prior.config;
  config.n_max += extra_budget;

  detail::EvalCache cache;
  for (const TraceRecord& r : prior.trace) {
    cache.emplace(detail::point_key(r.point),
                  detail::CachedEvaluation{r.f, r.wall_time});
  }
  return detail::run_impl(config, prior.strategy, cache);
}

}  // namespace hord
