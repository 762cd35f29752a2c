#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "boomid/plant.hpp"
#include "boomid/signal.hpp"

using boomid::cplx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

TEST_CASE("default_boom_plant: mode-1 frequency endpoints and midpoint") {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    const double p_min = plant.modal.p_min, p_max = plant.modal.p_max;
    CHECK(plant.modal.mode_freq_hz(0, p_min) == doctest::Approx(5.6).epsilon(1e-12));
    CHECK(plant.modal.mode_freq_hz(0, p_max) == doctest::Approx(4.8).epsilon(1e-12));
    CHECK(plant.modal.mode_freq_hz(0, 0.5 * (p_min + p_max)) == doctest::Approx(5.2).epsilon(1e-12));
    // modes sorted by natural frequency at p_min, damping in (0, 1)
    for (std::size_t m = 1; m < plant.modal.modes.size(); ++m)
        CHECK(plant.modal.mode_freq_hz(m, p_min) > plant.modal.mode_freq_hz(m - 1, p_min));
    for (std::size_t m = 0; m < plant.modal.modes.size(); ++m)
        for (double p : {p_min, p_max}) {
            CHECK(plant.modal.mode_zeta(m, p) > 0.0);
            CHECK(plant.modal.mode_zeta(m, p) < 1.0);
        }
}

TEST_CASE("plant_frf: DC is exactly zero, resonance peak, conjugate symmetry") {
    boomid::ParametricPlant plant = boomid::default_boom_plant();
    CHECK(boomid::plant_frf_at(plant, 0.0, 0.004) == cplx(0.0, 0.0));

    // single-mode plant: |H(i w_n)| = g / (2 zeta w_n)
    boomid::ParametricPlant single;
    single.modal.p_min = 0.0;
    single.modal.p_max = 1.0;
    single.modal.modes = {{10.0, 10.0, 0.01, 0.01, 1.0}};
    const double w = kTwoPi * 10.0;
    const cplx peak = boomid::plant_frf_at(single, 10.0, 0.5);
    CHECK(std::abs(peak) == doctest::Approx(1.0 / (2.0 * 0.01 * w)).epsilon(1e-9));

    const cplx pos = boomid::plant_frf_at(plant, 7.3, 0.004);
    const cplx neg = boomid::plant_frf_at(plant, -7.3, 0.004);
    CHECK(std::abs(neg - std::conj(pos)) < 1e-15);

    CHECK_THROWS_AS(boomid::plant_frf_at(plant, 5.0, 1.0), std::invalid_argument);
}

TEST_CASE("plant_frf: finite-difference slope matches the analytic dH/dp") {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    const double p_min = plant.modal.p_min, p_max = plant.modal.p_max;

    // analytic derivative of the modal sum under affine w(p), zeta(p)
    auto dh_dp = [&](double f, double p) {
        const cplx s(0.0, kTwoPi * f);
        cplx acc(0.0, 0.0);
        for (std::size_t m = 0; m < plant.modal.modes.size(); ++m) {
            const boomid::Mode& mode = plant.modal.modes[m];
            const double w0 = kTwoPi * plant.modal.mode_freq_hz(m, p);
            const double z0 = plant.modal.mode_zeta(m, p);
            const double dw = kTwoPi * (mode.freq_at_pmax_hz - mode.freq_at_pmin_hz) / (p_max - p_min);
            const double dz = (mode.zeta_at_pmax - mode.zeta_at_pmin) / (p_max - p_min);
            const cplx den = s * s + 2.0 * z0 * w0 * s + w0 * w0;
            const cplx dden = 2.0 * (dz * w0 + z0 * dw) * s + 2.0 * w0 * dw;
            acc += -mode.residue_gain * s * dden / (den * den);
        }
        return acc;
    };

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> fdist(1.0, 90.0);
    std::uniform_real_distribution<double> pdist(p_min * 1.5, p_max * 0.9);
    for (int q = 0; q < 20; ++q) {
        const double f = fdist(rng), p = pdist(rng);
        const double dp = 1e-6 * (p_max - p_min);
        const cplx fd = (boomid::plant_frf_at(plant, f, p + dp) -
                         boomid::plant_frf_at(plant, f, p - dp)) / (2.0 * dp);
        const cplx an = dh_dp(f, p);
        CHECK(std::abs(fd - an) < 1e-3 * std::abs(an));
    }
}

TEST_CASE("plant_frf: mode-1 peak frequency decreases monotonically in p") {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    auto peak_freq = [&](double p) {
        double best_f = 0.0, best = 0.0;
        for (double f = 3.0; f <= 8.0; f += 0.0005) {
            const double mag = std::abs(boomid::plant_frf_at(plant, f, p));
            if (mag > best) { best = mag; best_f = f; }
        }
        return best_f;
    };
    double prev = 1e300;
    for (int i = 0; i < 5; ++i) {
        const double p = plant.modal.p_min +
                         (plant.modal.p_max - plant.modal.p_min) * static_cast<double>(i) / 4.0;
        const double f = peak_freq(p);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("simulate_response: zero force gives pure seeded noise") {
    boomid::ParametricPlant plant = boomid::default_boom_plant();
    plant.noise_std = 0.1;
    boomid::TimeSeries force{256.0, std::vector<double>(32768, 0.0), 0.0};
    const boomid::TimeSeries vel = boomid::simulate_response(plant, force, 0.004, 1234);
    double ss = 0.0, mean = 0.0;
    for (double x : vel.samples) mean += x;
    mean /= static_cast<double>(vel.samples.size());
    for (double x : vel.samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(vel.samples.size()));
    CHECK(sd == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("simulate_response: single-bin sinusoid sees |H| and arg H") {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    const double fs = 256.0, f0 = 8.0, p = 0.004;
    const std::size_t n = 1024; // f0 sits exactly on a bin
    boomid::TimeSeries force{fs, {}, 0.0};
    force.samples.resize(n);
    const double amp = 0.003;
    for (std::size_t i = 0; i < n; ++i)
        force.samples[i] = amp * std::sin(kTwoPi * f0 * static_cast<double>(i) / fs);
    const boomid::TimeSeries vel = boomid::simulate_response(plant, force, p, 0);
    const cplx h = boomid::plant_frf_at(plant, f0, p);
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = amp * std::abs(h) *
                              std::sin(kTwoPi * f0 * static_cast<double>(i) / fs + std::arg(h));
        CHECK(std::abs(vel.samples[i] - expect) < 1e-9);
    }
}

TEST_CASE("simulate_response: linear in the force at zero noise") {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    const boomid::TimeSeries f1 = boomid::gen_chirp(1.0, 50.0, 8.0, 256.0, 0.004);
    const boomid::TimeSeries f2 = boomid::gen_periodic(boomid::WaveShape::sine, 10.0, 8.0, 256.0, 0.002);
    boomid::TimeSeries sum = f1;
    for (std::size_t i = 0; i < sum.samples.size(); ++i) sum.samples[i] += f2.samples[i];
    const boomid::TimeSeries v1 = boomid::simulate_response(plant, f1, 0.004, 0);
    const boomid::TimeSeries v2 = boomid::simulate_response(plant, f2, 0.004, 0);
    const boomid::TimeSeries vs = boomid::simulate_response(plant, sum, 0.004, 0);
    for (std::size_t i = 0; i < vs.samples.size(); ++i)
        CHECK(std::abs(vs.samples[i] - (v1.samples[i] + v2.samples[i])) < 1e-10);
}

TEST_CASE("gaussian_noise: deterministic per seed") {
    const auto a = boomid::gaussian_noise(256, 1.0, 77);
    const auto b = boomid::gaussian_noise(256, 1.0, 77);
    const auto c = boomid::gaussian_noise(256, 1.0, 78);
    CHECK(a == b);
    CHECK(a != c);
    const auto z = boomid::gaussian_noise(16, 0.0, 5);
    for (double x : z) CHECK(x == 0.0);
}
