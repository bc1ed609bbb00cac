// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "ionload/ionization.hpp"
#include "ionload/plume.hpp"
#include "ionload/random.hpp"

namespace {

using namespace ionload;

void BM_Chord(benchmark::State& state)
{
    const IonizationModel model(default_autoionizing_scheme(), static_cast<int>(state.range(0)));
    double offset = 0.0;
    for (auto _ : state) {
        offset = offset > 40e-6 ? 0.0 : offset + 1e-7;
        benchmark::DoNotOptimize(model.chord({0.0, offset, 0.5 * offset}, 1e6));
    }
}
BENCHMARK(BM_Chord)->Arg(16)->Arg(48);

void BM_Evaluate(benchmark::State& state)
{
    const IonizationModel model(default_autoionizing_scheme());
    const PlumeModel plume;
    const AtomSampler sampler(plume, default_barium_catalog().isotopes());
    Rng rng = make_stream(1, 0);
    std::vector<NeutralAtom> atoms;
    for (int i = 0; i < 4096; ++i) atoms.push_back(sampler.sample(rng));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.evaluate(atoms[i]));
        i = (i + 1) % atoms.size();
    }
}
BENCHMARK(BM_Evaluate);

void BM_PopulationAverages(benchmark::State& state)
{
    const auto scheme = state.range(0) ? default_autoionizing_scheme() : default_nonresonant_scheme();
    const PlumeModel plume;
    for (auto _ : state) benchmark::DoNotOptimize(population_averages(scheme, plume));
}
BENCHMARK(BM_PopulationAverages)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
