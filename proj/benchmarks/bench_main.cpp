#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "boomid/paaa.hpp"
#include "boomid/plant.hpp"
#include "boomid/signal.hpp"
#include "boomid/vecfit.hpp"

namespace {

using boomid::cplx;

void BM_fft_pow2(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    boomid::TimeSeries ts{256.0, {}, 0.0};
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ts.samples.resize(n);
    for (double& x : ts.samples) x = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(boomid::fft_spectrum(ts));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_fft_pow2)->Arg(4096)->Arg(32768);

void BM_vf_fit(benchmark::State& state) {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    std::vector<double> freq;
    std::vector<cplx> values;
    for (int j = 0; j < 400; ++j) {
        const double f = 0.5 + 90.0 * j / 399.0;
        freq.push_back(f);
        values.push_back(boomid::plant_frf_at(plant, f, 0.004));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(boomid::vf_fit(freq, values, 10));
    }
}
BENCHMARK(BM_vf_fit);

void BM_paaa_evaluate(benchmark::State& state) {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    boomid::FrfDataset ds;
    for (int j = 0; j < 200; ++j)
        ds.freq_hz.push_back(0.5 + 90.0 * j / 199.0);
    for (int k = 0; k < 7; ++k)
        ds.params.push_back(plant.modal.p_min +
                            (plant.modal.p_max - plant.modal.p_min) * k / 6.0);
    ds.values.resize(ds.n_freq() * ds.n_params());
    for (std::size_t j = 0; j < ds.n_freq(); ++j)
        for (std::size_t k = 0; k < ds.n_params(); ++k)
            ds.at(j, k) = boomid::plant_frf_at(plant, ds.freq_hz[j], ds.params[k]);
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-8;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    (void)diag;
    double f = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            boomid::paaa_evaluate(model, cplx(0.0, 2.0 * std::numbers::pi * f), 0.004));
        f += 0.01;
        if (f > 90.0) f = 0.5;
    }
}
BENCHMARK(BM_paaa_evaluate);

} // namespace

BENCHMARK_MAIN();
