// Copyright 2026 The qtransfer Authors
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
// Serial reference vs OpenMP kernels. Arguments: problem size, then worker
// count for the parallel variants.

#include <benchmark/benchmark.h>

#include "qtransfer/monte_carlo_oracle.hpp"
#include "qtransfer/parallel.hpp"
#include "qtransfer/transfer_matrix.hpp"

namespace {

using namespace qtransfer;

struct Qutrit {
  OperatorBasis basis = gell_mann_basis(3);
  SpinSubalgebra sub = find_spin_subalgebra(basis, {0, 1, 2});
  NoiseModel noise = NoiseModel::gaussian_isotropic(0.5);
  FieldConfig field{0.7, 2, 0.4};
  DensityState state0{basis, RVector::Zero(8)};
  Qutrit() { state0.coeffs[2] = 0.3; }
};

void BM_EnsembleSerial(benchmark::State& state) {
  const Qutrit q;
  const EnsembleRequest req{q.noise, q.field, q.sub, q.basis, q.state0, 20,
                            static_cast<std::size_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(req));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const Qutrit q;
  const EnsembleRequest req{q.noise, q.field, q.sub, q.basis, q.state0, 20,
                            static_cast<std::size_t>(state.range(0)), 1};
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(req, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloTSerial(benchmark::State& state) {
  const Qutrit q;
  const AveragingOptions opt{static_cast<std::size_t>(state.range(0)), 3, 1};
  for (auto _ : state) benchmark::DoNotOptimize(general_T_serial(q.basis, q.sub, q.noise, q.field, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloTParallel(benchmark::State& state) {
  const Qutrit q;
  const AveragingOptions opt{static_cast<std::size_t>(state.range(0)), 3, static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(general_T(q.basis, q.sub, q.noise, q.field, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void parallel_args(benchmark::internal::Benchmark* b) {
  const int max_workers = resolve_workers(0);
  for (int n : {4096, 32768})
    for (int w = 1; w <= max_workers; w *= 2) b->Args({n, w});
}

BENCHMARK(BM_EnsembleSerial)->Arg(4096)->Arg(32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloTSerial)->Arg(4096)->Arg(32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloTParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
