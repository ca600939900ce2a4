#include <benchmark/benchmark.h>

#include <cstddef>

#include "sicsim/canceller.hpp"
#include "sicsim/channel.hpp"
#include "sicsim/delay.hpp"
#include "sicsim/lms.hpp"
#include "sicsim/pa.hpp"
#include "sicsim/spectral.hpp"
#include "sicsim/waveform.hpp"

namespace {

constexpr double kRate = 500e6;

sicsim::ComplexSignal noise(std::size_t n, double bandwidth_hz = 20e6) {
    sicsim::WaveformSpec spec;
    spec.bandwidth_hz = bandwidth_hz;
    spec.duration_s = static_cast<double>(n) / kRate;
    spec.seed = 42;
    return sicsim::generate(spec, kRate);
}

void BM_generate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    sicsim::WaveformSpec spec;
    spec.duration_s = static_cast<double>(n) / kRate;
    for (auto _ : state) {
        auto s = sicsim::generate(spec, kRate);
        benchmark::DoNotOptimize(s.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_generate)->Range(1 << 14, 1 << 18);

void BM_fractional_delay(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto d = sicsim::fractional_delay(x, 5.3e-9);
        benchmark::DoNotOptimize(d.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_fractional_delay)->Range(1 << 14, 1 << 18);

void BM_amplify(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    const sicsim::PaParams pa;
    for (auto _ : state) {
        auto y = sicsim::amplify(x, pa);
        benchmark::DoNotOptimize(y.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_amplify)->Range(1 << 14, 1 << 18);

void BM_propagate(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)));
    const auto ch = sicsim::preset(sicsim::ChannelPreset::circulator);
    for (auto _ : state) {
        auto y = sicsim::propagate(ch, x, 1);
        benchmark::DoNotOptimize(y.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_propagate)->Range(1 << 14, 1 << 18);

void BM_psd_welch(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)), 80e6);
    for (auto _ : state) {
        auto psd = sicsim::psd_welch(x);
        benchmark::DoNotOptimize(psd.psd_dbm_per_hz.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_psd_welch)->Range(1 << 14, 1 << 18);

void BM_closed_loop(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto tx = sicsim::amplify(noise(n + sicsim::kDelayFilterLength),
                                    sicsim::PaParams{});
    const auto ch = sicsim::preset(sicsim::ChannelPreset::circulator);
    auto y = sicsim::propagate(ch, tx, 1);
    y.samples.resize(n);
    const sicsim::CancellerConfig cc;
    const sicsim::LmsConfig lms;
    const sicsim::CancellerWeights w0{{{0.0, 0.0}, {0.0, 0.0}}};
    for (auto _ : state) {
        auto r = sicsim::run_closed_loop_prepared(y, tx, cc, lms, w0);
        benchmark::DoNotOptimize(r.z.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_closed_loop)->Range(1 << 14, 1 << 17);

}  // namespace

BENCHMARK_MAIN();
