#include <benchmark/benchmark.h>

#include "mcap/channel.hpp"
#include "mcap/harness.hpp"
#include "mcap/sync.hpp"

namespace {

mcap::McapConfig config_for(int m, int order) {
    mcap::McapConfig cfg;
    cfg.m = m;
    cfg.spec = mcap::ConstellationSpec::make(order);
    return cfg;
}

void BM_DesignSrrc(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mcap::design_srrc(0.15, 40, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_DesignSrrc)->Arg(4)->Arg(20)->Arg(40);

void BM_BuildFilterBank(benchmark::State& state) {
    const auto cfg = config_for(static_cast<int>(state.range(0)), 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::build_filter_bank(cfg));
    }
}
BENCHMARK(BM_BuildFilterBank)->Arg(1)->Arg(5)->Arg(10);

void BM_Transmit(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto cfg = config_for(m, 16);
    const auto bank = mcap::build_filter_bank(cfg);
    const std::size_t per_band = 2048;
    const auto bits = mcap::prbs(1, per_band * m * cfg.spec.bits_per_symbol);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::transmit(bits, cfg, bank));
    }
    state.SetItemsProcessed(state.iterations() * per_band * m);
}
BENCHMARK(BM_Transmit)->Arg(1)->Arg(5)->Arg(10);

void BM_Receive(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto cfg = config_for(m, 16);
    const auto bank = mcap::build_filter_bank(cfg);
    const std::size_t per_band = 2048;
    const auto bits = mcap::prbs(1, per_band * m * cfg.spec.bits_per_symbol);
    const auto wave = mcap::transmit(bits, cfg, bank);
    const auto eq = mcap::EqualizerState::identity(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::receive(wave, cfg, bank, eq, per_band));
    }
    state.SetItemsProcessed(state.iterations() * per_band * m);
}
BENCHMARK(BM_Receive)->Arg(1)->Arg(5)->Arg(10);

void BM_SchmidlCoxMetric(benchmark::State& state) {
    const auto cfg = config_for(5, 4);
    const auto p = mcap::make_preamble(cfg, 32, 1);
    mcap::Waveform wave;
    wave.sample_rate = cfg.sample_rate();
    wave.samples.assign(4096, 0.0);
    wave.samples.insert(wave.samples.end(), p.waveform.samples.begin(),
                        p.waveform.samples.end());
    wave.samples.insert(wave.samples.end(), 4096, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::schmidl_cox_metric(wave, p.half_len));
    }
    state.SetItemsProcessed(state.iterations() * wave.size());
}
BENCHMARK(BM_SchmidlCoxMetric);

void BM_ApplyChannel(benchmark::State& state) {
    const auto cfg = config_for(5, 16);
    const auto bank = mcap::build_filter_bank(cfg);
    const auto bits = mcap::prbs(1, 2048 * 5 * 4);
    const auto wave = mcap::transmit(bits, cfg, bank);
    mcap::ChannelConfig ch;
    ch.snr_db = 20.0;
    ch.flicker_enabled = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::apply_channel(wave, ch));
    }
    state.SetItemsProcessed(state.iterations() * wave.size());
}
BENCHMARK(BM_ApplyChannel);

void BM_WelchPsd(benchmark::State& state) {
    const auto cfg = config_for(5, 16);
    const auto bank = mcap::build_filter_bank(cfg);
    const auto bits = mcap::prbs(1, 8192 * 5 * 4);
    const auto wave = mcap::transmit(bits, cfg, bank);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcap::welch_psd(wave, 4096));
    }
}
BENCHMARK(BM_WelchPsd);

}  // namespace

BENCHMARK_MAIN();
