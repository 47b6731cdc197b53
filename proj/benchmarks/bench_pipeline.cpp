// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include <benchmark/benchmark.h>

#include <otfsjrc/channel.hpp>
#include <otfsjrc/classify.hpp>
#include <otfsjrc/faor.hpp>
#include <otfsjrc/vitals.hpp>

#include <cmath>

using namespace otfsjrc;

namespace {

FrameConfig frame(benchmark::State& state)
{
    FrameConfig f;
    f.m_bins = static_cast<std::size_t>(state.range(0));
    f.n_bins = static_cast<std::size_t>(state.range(1));
    return f;
}

ChannelConfig scene()
{
    TargetSpec t;
    t.delay_bins = 3;
    t.doppler_bins = 2;
    t.vitals = VitalMotion{};
    ChannelConfig c;
    c.targets = {t};
    c.targets.push_back(self_interference_target(c, 30.0));
    c.noise_power = 0.1;
    c.seed = 1;
    return c;
}

void grid_sizes(benchmark::internal::Benchmark* b)
{
    b->Args({64, 16})->Args({512, 128})->Args({3333, 280})->Unit(benchmark::kMicrosecond);
}

void BM_Modulate(benchmark::State& state)
{
    const auto x = generate_frame(frame(state), SymbolAlphabet::qpsk(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(modulate(x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.cells().size()));
}
BENCHMARK(BM_Modulate)->Apply(grid_sizes);

void BM_DelayDopplerChannel(benchmark::State& state)
{
    const auto x = generate_frame(frame(state), SymbolAlphabet::qpsk(), 1);
    const auto cfg = scene();
    std::size_t dwell = 0;
    for (auto _ : state) benchmark::DoNotOptimize(apply_dd_channel(x, cfg, dwell++));
}
BENCHMARK(BM_DelayDopplerChannel)->Apply(grid_sizes);

void BM_RangeDopplerMap(benchmark::State& state)
{
    const auto x = generate_frame(frame(state), SymbolAlphabet::qpsk(), 1);
    const auto y = apply_dd_channel(x, scene(), 0);
    const FaorDetector det(x, DetectorParams{});
    for (auto _ : state) benchmark::DoNotOptimize(det.rdm(y));
}
BENCHMARK(BM_RangeDopplerMap)->Apply(grid_sizes);

void BM_ExtractPeaks(benchmark::State& state)
{
    const auto x = generate_frame(frame(state), SymbolAlphabet::qpsk(), 1);
    const auto rdm = FaorDetector(x, DetectorParams{}).rdm(apply_dd_channel(x, scene(), 0));
    for (auto _ : state) benchmark::DoNotOptimize(extract_peaks(rdm, DetectorParams{}));
}
BENCHMARK(BM_ExtractPeaks)->Apply(grid_sizes);

void BM_EstimateVitals(benchmark::State& state)
{
    PhaseTrace t;
    t.dwell_interval_s = 0.06;
    for (int l = 0; l < state.range(0); ++l) {
        const double s = 0.06 * l;
        t.phases_rad.push_back(6.0 * std::sin(2.0 * kPi * 0.25 * s) + 0.36 * std::sin(2.0 * kPi * 1.2 * s));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_vitals(t, BandSpec::breathing(), BandSpec::heartbeat(), 2048));
}
BENCHMARK(BM_EstimateVitals)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_Classify(benchmark::State& state)
{
    PhaseTrace t;
    for (int l = 0; l < state.range(0); ++l) t.phases_rad.push_back(std::sin(2.0 * kPi * 0.25 * 0.06 * l));
    for (auto _ : state) benchmark::DoNotOptimize(classify_sp(t, ClassifierParams{}));
}
BENCHMARK(BM_Classify)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
