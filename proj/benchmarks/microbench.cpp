// Copyright 2026 The predbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/dataset.hpp"
#include "predbench/metrics.hpp"
#include "predbench/model_pred.hpp"
#include "predbench/network.hpp"
#include "predbench/random.hpp"
#include "predbench/zerocost.hpp"

namespace {

using namespace predbench;

const StoreHeader& header() {
  static const StoreHeader h;
  return h;
}

const SyntheticDataset& dataset() {
  static const SyntheticDataset d = make_dataset(header().dataset);
  return d;
}

// dense, dense_wide, skip_connect, tanh, dense, dense_wide.
Architecture mixed_arch() { return Architecture::parse("2|3|1|4|2|3"); }

void BM_KendallTau(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = uniform01(rng);
    y[i] = x[i] + 0.3 * uniform01(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = uniform01(rng);
    y[i] = uniform01(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(200)->Arg(2000);

void BM_LossAndGradient(benchmark::State& state) {
  const auto& d = dataset();
  const Network net = Network::instantiate(header().space, mixed_arch(), header().net, d.input_dim,
                                           d.num_classes, 3);
  const std::size_t b = header().train.batch_size;
  std::vector<double> xs(d.train_x.begin(), d.train_x.begin() + b * d.input_dim);
  std::vector<int> ys(d.train_y.begin(), d.train_y.begin() + b);
  std::vector<double> grad;
  for (auto _ : state) benchmark::DoNotOptimize(net.loss_and_gradient(xs, ys, grad));
}
BENCHMARK(BM_LossAndGradient);

void BM_TrainRecord(benchmark::State& state) {
  StoreHeader h = header();
  h.train.epochs = static_cast<std::size_t>(state.range(0));
  const Architecture a = mixed_arch();
  for (auto _ : state) benchmark::DoNotOptimize(train_record(h, dataset(), a));
}
BENCHMARK(BM_TrainRecord)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ZeroCost(benchmark::State& state) {
  const auto kind = all_proxy_kinds()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(to_string(kind));
  const Architecture a = mixed_arch();
  for (auto _ : state) {
    benchmark::DoNotOptimize(zero_cost_score(header(), dataset(), a, kind, 7, 32));
  }
}
BENCHMARK(BM_ZeroCost)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

TrainingSet random_rows(std::size_t n) {
  Rng rng(4);
  TrainingSet t;
  t.x = Matrix(0, 30);
  for (std::size_t i = 0; i < n; ++i) {
    const Architecture a = sample_uniform(header().space, rng);
    t.x.push_row(encode(header().space, a, EncodingKind::kAdjacencyOneHot).values);
    t.y.push_back(uniform01(rng));
  }
  return t;
}

void BM_FitModel(benchmark::State& state) {
  const auto kind = all_model_kinds()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(to_string(kind));
  const TrainingSet t = random_rows(static_cast<std::size_t>(state.range(1)));
  const Hyperparams hp = HpoSpec::defaults_for(kind).defaults();
  for (auto _ : state) benchmark::DoNotOptimize(fit_with(kind, t, hp, 1));
}
BENCHMARK(BM_FitModel)
    ->ArgsProduct({{0, 1, 2, 3, 4}, {100, 300}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
