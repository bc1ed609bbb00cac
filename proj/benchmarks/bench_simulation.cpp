// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "ionload/simulation.hpp"

namespace {

using namespace ionload;

void BM_RunPulse(benchmark::State& state)
{
    Campaign campaign;
    campaign.max_tracked_atoms = static_cast<int>(state.range(0));
    int index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_pulse(campaign, index++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunPulse)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Campaign(benchmark::State& state)
{
    Campaign campaign;
    campaign.n_pulses = 32;
    for (auto _ : state) benchmark::DoNotOptimize(run_campaign(campaign, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Campaign)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
