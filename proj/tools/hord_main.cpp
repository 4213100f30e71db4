#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hord/config.hpp"
#include "hord/study.hpp"

namespace {

// Exit codes: 0 success, 1 unexpected error, 2 bad configuration,
// 3 an evaluator failed (partial results are still written).
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kBadConfig = 2;
constexpr int kEvaluatorFailed = 3;

void print_summary(const hord::StudySummary& summary) {
  std::printf("%-14s %7s %16s %16s %16s\n", "algorithm", "trials", "mean best",
              "std", "median");
  for (const hord::AlgorithmSummary& a : summary.algorithms) {
    std::printf("%-14s %7d %16.8g %16.8g %16.8g\n", a.algorithm.c_str(), a.trials,
                a.mean_best_f, a.std_best_f, a.median_best_f);
  }
  if (summary.target) {
    for (const hord::AlgorithmSummary& a : summary.algorithms) {
      int reached = 0;
      for (const auto& e : a.evals_to_target) reached += e.has_value();
      std::printf("%-14s reached target %.8g in %d/%d trials\n", a.algorithm.c_str(),
                  *summary.target, reached, a.trials);
    }
  }
  for (const auto& [pair, p] : summary.rank_sum_p) {
    std::printf("rank-sum %-28s p = %.6g\n", pair.c_str(), p);
  }
}

int run_command(const std::string& config_path,
                const std::vector<std::string>& algorithms, std::optional<int> trials,
                std::optional<int> max_evals, std::optional<std::uint64_t> seed,
                const std::string& out_dir) {
  hord::StudyConfig cfg = hord::load_study_config(config_path);
  if (!algorithms.empty()) {
    cfg.algorithms.clear();
    for (const std::string& name : algorithms) {
      cfg.algorithms.push_back(hord::parse_algorithm(name));
    }
  }
  if (trials) cfg.trials = *trials;
  if (max_evals) cfg.n_max = *max_evals;
  if (seed) cfg.base_seed = *seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  cfg.validate();

  const hord::StudySummary summary = hord::run_study(cfg);
  print_summary(summary);
  std::printf("wrote traces, summary.json and curves.csv to %s\n",
              cfg.out_dir.string().c_str());
  if (summary.evaluator_failed) {
    std::fprintf(stderr, "at least one run ended with an evaluator failure\n");
    return kEvaluatorFailed;
  }
  return kOk;
}

int report_command(const std::string& study_dir, std::optional<double> target,
                   bool write) {
  const hord::StudySummary summary = hord::summarize_traces(study_dir, target);
  print_summary(summary);
  if (write) {
    hord::write_summary_files(summary, study_dir);
    std::printf("rewrote summary.json and curves.csv in %s\n", study_dir.c_str());
  }
  return kOk;
}

int validate_command(const std::string& config_path) {
  const hord::StudyConfig cfg = hord::load_study_config(config_path);
  std::printf("configuration OK: %d variable(s), %d algorithm(s), %d trial(s), %d evaluations\n",
              cfg.domain.dimension(), static_cast<int>(cfg.algorithms.size()),
              cfg.trials, cfg.n_max);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark harness for surrogate-based black-box optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> algorithms;
  std::optional<int> trials;
  std::optional<int> max_evals;
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "run a study and write traces + summary");
  run->add_option("--config", config_path, "study config file (.toml or .json)")
      ->required();
  run->add_option("--algo", algorithms,
                  "algorithms to run (hord, hord-isp, random, rbf-uniform); "
                  "overrides the config");
  run->add_option("--trials", trials, "trials per algorithm");
  run->add_option("--max-evals", max_evals, "evaluation budget per trial");
  run->add_option("--seed", seed, "base seed (trial k uses seed + k)");
  run->add_option("--out", out_dir, "output directory");

  std::string study_dir;
  std::optional<double> target;
  bool write_report = false;
  CLI::App* report = app.add_subcommand(
      "report", "recompute a summary from the traces in a study directory");
  report->add_option("--study", study_dir, "study directory with .jsonl traces")
      ->required();
  report->add_option("--target", target, "objective target for evals-to-target");
  report->add_flag("--write", write_report, "rewrite summary.json and curves.csv");

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "parse and validate a config, then exit");
  validate->add_option("--config", validate_path, "study config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(config_path, algorithms, trials, max_evals, seed, out_dir);
    }
    if (report->parsed()) return report_command(study_dir, target, write_report);
    if (validate->parsed()) return validate_command(validate_path);
  } catch (const hord::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    switch (e.code()) {
      case hord::Errc::ConfigInvalid:
      case hord::Errc::CorruptTrace:
        return kBadConfig;
      case hord::Errc::Timeout:
      case hord::Errc::ProtocolError:
      case hord::Errc::NonFiniteValue:
      case hord::Errc::ChildCrashed:
      case hord::Errc::EvaluationError:
        return kEvaluatorFailed;
      default:
        return kError;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
