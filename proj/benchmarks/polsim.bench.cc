// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "polsim/measurement.h"
#include "polsim/montecarlo.h"
#include "polsim/ppbs.h"
#include "polsim/rng.h"
#include "polsim/selection.h"

using namespace polsim;

static std::vector<MeasurementSetting> alternating_settings(size_t n) {
    std::vector<MeasurementSetting> out;
    for (size_t k = 0; k < n; k++) {
        out.push_back({k % 2 == 0 ? BlochVector::z() : BlochVector::normalized(0.6, 0, 0.8), 0.1 + 0.04 * static_cast<double>(k % 16)});
    }
    return out;
}

static void BM_outcome_distribution(benchmark::State &state) {
    auto settings = alternating_settings(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(outcome_distribution(states::D(), settings));
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}
BENCHMARK(BM_outcome_distribution)->Arg(4)->Arg(10)->Arg(16);

static void BM_tree_propagate(benchmark::State &state) {
    auto settings = alternating_settings(static_cast<size_t>(state.range(0)));
    auto tree = build_tree(settings);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate(tree, states::D()));
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}
BENCHMARK(BM_tree_propagate)->Arg(4)->Arg(10)->Arg(16);

static void BM_philox_uniform(benchmark::State &state) {
    PhiloxStream rng({42, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.uniform());
    }
}
BENCHMARK(BM_philox_uniform);

static void BM_run_shards_reselection(benchmark::State &state) {
    std::vector<MeasurementSetting> settings{{BlochVector::z(), 0.05}, {BlochVector::z(), 0.05}};
    uint64_t shots = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_shards(states::D(), settings, SelectionSpec::reselect(), shots, {7, 0}, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_shards_reselection)->Arg(100'000);

BENCHMARK_MAIN();
