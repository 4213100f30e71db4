#include "hord/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hord/stats.hpp"
#include "run_impl.hpp"

namespace hord {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Hord: return "hord";
    case Algorithm::HordIsp: return "hord-isp";
    case Algorithm::Random: return "random";
    case Algorithm::RbfUniform: return "rbf-uniform";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "hord") return Algorithm::Hord;
  if (text == "hord-isp") return Algorithm::HordIsp;
  if (text == "random") return Algorithm::Random;
  if (text == "rbf-uniform") return Algorithm::RbfUniform;
  raise(Errc::ConfigInvalid, "unknown algorithm '" + text + "'");
}

void StudyConfig::validate() const {
  if (trials < 1) raise(Errc::ConfigInvalid, "trials must be at least 1");
  if (algorithms.empty()) raise(Errc::ConfigInvalid, "no algorithms selected");
  std::set<Algorithm> seen;
  for (const Algorithm a : algorithms) {
    if (!seen.insert(a).second) {
      raise(Errc::ConfigInvalid,
            std::string("algorithm '") + algorithm_name(a) + "' listed twice");
    }
    if (a == Algorithm::HordIsp && !isp) {
      raise(Errc::ConfigInvalid, "hord-isp requires an isp table in the config");
    }
    run_config(a, 0).validate();
  }
}

RunConfig StudyConfig::run_config(Algorithm algorithm, int trial) const {
  RunConfig rc;
  rc.domain = domain;
  rc.evaluator = evaluator;
  rc.n_max = n_max;
  rc.seed = base_seed + static_cast<std::uint64_t>(trial);
  rc.n0 = n0;
  rc.m = m;
  rc.d_tol = d_tol;
  rc.sigma2_init = sigma2_init;
  if (algorithm == Algorithm::HordIsp) rc.isp = isp;
  return rc;
}

std::string trace_filename(Algorithm algorithm, int trial) {
  std::ostringstream name;
  name << algorithm_name(algorithm) << "__trial" << trial << ".jsonl";
  return name.str();
}

namespace {

std::vector<double> best_curve(const Trace& trace, int n_max) {
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n_max));
  for (const TraceRecord& r : trace) curve.push_back(r.best_f_so_far);
  // A run that stopped early holds its last incumbent for the remaining
  // budget so curves stay comparable.
  while (static_cast<int>(curve.size()) < n_max && !curve.empty()) {
    curve.push_back(curve.back());
  }
  return curve;
}

StudySummary build_summary(
    const std::map<std::string, std::vector<Trace>>& traces_by_algorithm,
    const std::map<std::string, std::vector<std::string>>& terminations, int n_max,
    std::optional<double> target) {
  StudySummary summary;
  summary.n_max = n_max;
  summary.target = target;

  for (const auto& [name, traces] : traces_by_algorithm) {
    AlgorithmSummary algo;
    algo.algorithm = name;
    algo.trials = static_cast<int>(traces.size());
    summary.trials = std::max(summary.trials, algo.trials);

    // A trial whose evaluator died before the first value has no incumbent;
    // it reports NaN and is left out of the curve statistics.
    std::vector<std::vector<double>> curves;
    for (const Trace& trace : traces) {
      std::vector<double> curve = best_curve(trace, n_max);
      algo.final_best.push_back(
          curve.empty() ? std::numeric_limits<double>::quiet_NaN() : curve.back());
      if (target) algo.evals_to_target.push_back(evaluations_to_target(trace, *target));
      if (!curve.empty()) curves.push_back(std::move(curve));
    }
    const bool complete =
        !algo.final_best.empty() &&
        std::all_of(algo.final_best.begin(), algo.final_best.end(),
                    [](double v) { return std::isfinite(v); });
    const double nan = std::numeric_limits<double>::quiet_NaN();
    algo.mean_best_f = complete ? mean(algo.final_best) : nan;
    algo.std_best_f = complete ? sample_std(algo.final_best) : nan;
    algo.median_best_f = complete ? median(algo.final_best) : nan;

    algo.mean_curve.resize(static_cast<std::size_t>(n_max), nan);
    algo.std_curve.resize(static_cast<std::size_t>(n_max), nan);
    std::vector<double> column(curves.size());
    for (int n = 0; n < n_max && !curves.empty(); ++n) {
      for (std::size_t t = 0; t < curves.size(); ++t) {
        column[t] = curves[t][static_cast<std::size_t>(n)];
      }
      algo.mean_curve[static_cast<std::size_t>(n)] = mean(column);
      algo.std_curve[static_cast<std::size_t>(n)] = sample_std(column);
    }

    const auto term = terminations.find(name);
    if (term != terminations.end()) {
      algo.terminations = term->second;
      for (const std::string& t : algo.terminations) {
        summary.evaluator_failed |= t == termination_name(Termination::EvaluatorFailure);
      }
    }
    summary.algorithms.push_back(std::move(algo));
  }

  std::sort(summary.algorithms.begin(), summary.algorithms.end(),
            [](const AlgorithmSummary& x, const AlgorithmSummary& y) {
              return x.algorithm < y.algorithm;
            });

  // Pairwise two-sided rank-sum tests over the per-trial final values.
  for (std::size_t i = 0; i < summary.algorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < summary.algorithms.size(); ++j) {
      const AlgorithmSummary& x = summary.algorithms[i];
      const AlgorithmSummary& y = summary.algorithms[j];
      if (x.final_best.size() < 2 || y.final_best.size() < 2) continue;
      const auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(),
                           [](double e) { return std::isfinite(e); });
      };
      if (!finite(x.final_best) || !finite(y.final_best)) continue;
      summary.rank_sum_p[x.algorithm + "_vs_" + y.algorithm] =
          rank_sum_test(x.final_best, y.final_best);
    }
  }
  return summary;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunResult baseline_random(const RunConfig& config) {
  config.validate();
  const Domain& domain = config.domain;
  const int dim = domain.dimension();

  Rng rng(config.seed);
  EvaluationHistory history(config.d_tol);
  Trace trace;
  std::unique_ptr<Evaluator> owned;
  auto evaluator = [&]() -> Evaluator& {
    if (config.custom_evaluator) return *config.custom_evaluator;
    if (!owned) owned = make_evaluator(config.evaluator, domain);
    return *owned;
  };

  Termination termination = Termination::BudgetExhausted;
  while (static_cast<int>(history.size()) < config.n_max) {
    // Fresh uniform draw; integer variables are sampled on their grid
    // directly so every feasible value is equally likely.
    Eigen::VectorXd y(dim);
    bool distinct = false;
    for (int tries = 0; tries < 100 && !distinct; ++tries) {
      for (int i = 0; i < dim; ++i) {
        const VariableSpec& v = domain.variable(i);
        if (v.kind == VarKind::Integer) {
          const auto span = static_cast<std::uint64_t>(v.upper - v.lower);
          y[i] = static_cast<double>(rng.uniform_int(span + 1)) /
                 static_cast<double>(span);
        } else {
          y[i] = rng.uniform01();
        }
      }
      distinct = history.min_distance(y) >= config.d_tol;
    }
    if (!distinct) {
      termination = Termination::Stalled;  // the grid is exhausted
      break;
    }

    const ExternalPoint external = domain.denormalize(y);
    const auto outcome = detail::evaluate_with_retry(evaluator, external);
    if (!outcome) {
      termination = Termination::EvaluatorFailure;
      break;
    }

    EvaluationRecord er;
    er.point = y;
    er.point_external = external;
    er.value = outcome->f;
    er.phase = Phase::Adaptive;
    er.wall_time = outcome->wall_time;
    history.record(std::move(er));

    TraceRecord tr;
    tr.n = static_cast<int>(history.size());
    tr.phase = Phase::Adaptive;
    tr.point = y;
    tr.point_external = external;
    tr.f = outcome->f;
    tr.best_f_so_far = history.best_value();
    tr.wall_time = outcome->wall_time;
    trace.push_back(std::move(tr));
  }

  RunResult result;
  result.trace = std::move(trace);
  result.termination = termination;
  result.config = config;
  if (!history.empty()) {
    result.x_best = history.best().point_external;
    result.f_best = history.best_value();
  } else {
    result.f_best = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

RunResult baseline_rbf_uniform(const RunConfig& config) {
  return run_with_strategy(config, CandidateStrategy::Uniform);
}

StudySummary run_study(const StudyConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  std::map<std::string, std::vector<Trace>> traces;
  std::map<std::string, std::vector<std::string>> terminations;
  for (const Algorithm algorithm : cfg.algorithms) {
    const std::string name = algorithm_name(algorithm);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const RunConfig rc = cfg.run_config(algorithm, trial);
      RunResult result;
      switch (algorithm) {
        case Algorithm::Hord:
        case Algorithm::HordIsp:
          result = run(rc);
          break;
        case Algorithm::Random:
          result = baseline_random(rc);
          break;
        case Algorithm::RbfUniform:
          result = baseline_rbf_uniform(rc);
          break;
      }
      // Persist before anything else can fail; partial studies stay useful.
      write_trace(result.trace, cfg.out_dir / trace_filename(algorithm, trial));
      traces[name].push_back(std::move(result.trace));
      terminations[name].push_back(termination_name(result.termination));
    }
  }

  StudySummary summary = build_summary(traces, terminations, cfg.n_max, cfg.target);
  write_summary_files(summary, cfg.out_dir);
  return summary;
}

StudySummary summarize_traces(const std::filesystem::path& dir,
                              std::optional<double> target) {
  if (!std::filesystem::is_directory(dir)) {
    raise(Errc::ConfigInvalid, "study directory does not exist: " + dir.string());
  }
  std::map<std::string, std::map<int, Trace>> by_algorithm;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    const std::string stem = entry.path().stem().string();
    const auto sep = stem.rfind("__trial");
    if (sep == std::string::npos) continue;
    int trial = -1;
    try {
      trial = std::stoi(stem.substr(sep + 7));
    } catch (const std::exception&) {
      continue;
    }
    by_algorithm[stem.substr(0, sep)][trial] = read_trace(entry.path());
  }
  if (by_algorithm.empty()) {
    raise(Errc::ConfigInvalid, "no trace files found in " + dir.string());
  }

  int n_max = 0;
  std::map<std::string, std::vector<Trace>> traces;
  for (auto& [name, by_trial] : by_algorithm) {
    for (auto& [trial, trace] : by_trial) {
      (void)trial;
      n_max = std::max(n_max, static_cast<int>(trace.size()));
      traces[name].push_back(std::move(trace));
    }
  }
  // Terminations are not persisted in the records; infer from length.
  std::map<std::string, std::vector<std::string>> terminations;
  for (const auto& [name, list] : traces) {
    for (const Trace& trace : list) {
      terminations[name].push_back(static_cast<int>(trace.size()) == n_max
                                       ? termination_name(Termination::BudgetExhausted)
                                       : "truncated");
    }
  }
  return build_summary(traces, terminations, n_max, target);
}

std::string summary_to_json(const StudySummary& summary) {
  nlohmann::json j;
  j["n_max"] = summary.n_max;
  j["trials"] = summary.trials;
  j["target"] = summary.target ? nlohmann::json(*summary.target) : nlohmann::json(nullptr);
  j["evaluator_failed"] = summary.evaluator_failed;
  nlohmann::json algos = nlohmann::json::array();
  for (const AlgorithmSummary& a : summary.algorithms) {
    nlohmann::json ja;
    ja["algorithm"] = a.algorithm;
    ja["trials"] = a.trials;
    ja["final_best"] = a.final_best;
    ja["mean_best_f"] = a.mean_best_f;
    ja["std_best_f"] = a.std_best_f;
    ja["median_best_f"] = a.median_best_f;
    ja["terminations"] = a.terminations;
    if (summary.target) {
      nlohmann::json evals = nlohmann::json::array();
      for (const auto& e : a.evals_to_target) {
        evals.push_back(e ? nlohmann::json(*e) : nlohmann::json(nullptr));
      }
      ja["evals_to_target"] = evals;
    }
    algos.push_back(std::move(ja));
  }
  j["algorithms"] = std::move(algos);
  j["rank_sum_p"] = summary.rank_sum_p;
  return j.dump(2) + "\n";
}

std::string curves_to_csv(const StudySummary& summary) {
  std::string csv = "algorithm,n,mean_best_f,std_best_f\n";
  for (const AlgorithmSummary& a : summary.algorithms) {
    for (int n = 1; n <= summary.n_max; ++n) {
      csv += a.algorithm;
      csv += ',';
      csv += std::to_string(n);
      csv += ',';
      csv += format_double(a.mean_curve[static_cast<std::size_t>(n - 1)]);
      csv += ',';
      csv += format_double(a.std_curve[static_cast<std::size_t>(n - 1)]);
      csv += '\n';
    }
  }
  return csv;
}

void write_summary_files(const StudySummary& summary,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "summary.json", std::ios::binary | std::ios::trunc);
    out << summary_to_json(summary);
  }
  {
    std::ofstream out(dir / "curves.csv", std::ios::binary | std::ios::trunc);
    out << curves_to_csv(summary);
  }
}

}  // namespace hord
