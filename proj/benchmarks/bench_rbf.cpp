#include <benchmark/benchmark.h>

#include "hord/rbf.hpp"
#include "hord/rng.hpp"

namespace {

// The sizes the adaptive loop actually sees: a 19-dimensional problem with
// a 200-evaluation budget refits the surrogate at every history size up to
// 200 and predicts 100*D candidates each iteration.

hord::FitInput random_instance(int n, int dim, std::uint64_t seed) {
  hord::Rng rng(seed);
  hord::FitInput input;
  input.points.resize(n, dim);
  input.values.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) input.points(i, d) = rng.uniform01();
    input.values[i] = -5.0 + 10.0 * rng.uniform01();
  }
  return input;
}

void fit(benchmark::State& state) {
  const auto input =
      random_instance(static_cast<int>(state.range(0)), 19, 2024);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hord::RbfModel::fit(input));
  }
}
BENCHMARK(fit)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void predict_batch(benchmark::State& state) {
  const auto model = hord::RbfModel::fit(random_instance(200, 19, 2024));
  hord::Rng rng(4048);
  Eigen::MatrixXd queries(1900, 19);
  for (int i = 0; i < queries.rows(); ++i) {
    for (int d = 0; d < queries.cols(); ++d) queries(i, d) = rng.uniform01();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict_batch(queries));
  }
}
BENCHMARK(predict_batch)->Unit(benchmark::kMillisecond);

}  // namespace
