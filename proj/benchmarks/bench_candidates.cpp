#include <benchmark/benchmark.h>

#include "hord/dycors.hpp"
#include "hord/rng.hpp"

namespace {

// One adaptive iteration's candidate work at the largest benchmarked size:
// 19 dimensions, 1900 candidates, a 200-point history.

struct Setup {
  hord::Domain domain;
  hord::SearchState state;
  Eigen::MatrixXd history;
  Eigen::VectorXd best;

  static Setup make() {
    std::vector<hord::VariableSpec> vars;
    for (int i = 0; i < 19; ++i) {
      vars.push_back({"x" + std::to_string(i + 1), -5.0, 5.0,
                      hord::VarKind::Continuous});
    }
    Setup s{hord::Domain(vars),
            hord::SearchState::make(19, 40, 200, hord::kSigma2Init, 1900),
            Eigen::MatrixXd(200, 19), Eigen::VectorXd(19)};
    hord::Rng rng(77);
    for (int i = 0; i < s.history.rows(); ++i) {
      for (int d = 0; d < 19; ++d) s.history(i, d) = rng.uniform01();
    }
    s.best = s.history.row(0);
    s.state.n = 120;  // mid-run: a nontrivial perturbation probability
    return s;
  }
};

void generate(benchmark::State& state) {
  Setup s = Setup::make();
  hord::Rng rng(123);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hord::generate_candidates(
        s.state, s.domain, s.best, s.history, 1e-3, rng));
  }
}
BENCHMARK(generate)->Unit(benchmark::kMillisecond);

void generate_and_score(benchmark::State& state) {
  Setup s = Setup::make();
  hord::Rng rng(123);
  for (auto _ : state) {
    hord::CandidateSet set = hord::generate_candidates(
        s.state, s.domain, s.best, s.history, 1e-3, rng);
    Eigen::VectorXd surrogate(static_cast<int>(set.candidates.size()));
    for (int i = 0; i < surrogate.size(); ++i) {
      surrogate[i] = set.candidates[static_cast<std::size_t>(i)].point.sum();
    }
    hord::score_candidates(set.candidates, surrogate, s.history, 0.5);
    benchmark::DoNotOptimize(hord::select_next(set.candidates));
  }
}
BENCHMARK(generate_and_score)->Unit(benchmark::kMillisecond);

}  // namespace
