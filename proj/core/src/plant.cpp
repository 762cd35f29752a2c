#include "boomid/plant.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "boomid/errors.hpp"

namespace boomid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double affine(double at_min, double at_max, double p, double p_min, double p_max) {
    const double t = (p - p_min) / (p_max - p_min);
    return at_min + t * (at_max - at_min);
}

void check_p(const ModalParams& modal, double p) {
    if (p < modal.p_min || p > modal.p_max)
        throw std::invalid_argument("plant: load parameter outside [p_min, p_max]");
}

} // namespace

double ModalParams::mode_freq_hz(std::size_t m, double p) const {
    const Mode& mode = modes.at(m);
    return affine(mode.freq_at_pmin_hz, mode.freq_at_pmax_hz, p, p_min, p_max);
}

double ModalParams::mode_zeta(std::size_t m, double p) const {
    const Mode& mode = modes.at(m);
    return affine(mode.zeta_at_pmin, mode.zeta_at_pmax, p, p_min, p_max);
}

ParametricPlant default_boom_plant() {
    // Mode 1 carries the dominant load dependence (frequency and damping
    // both sweep). Two mid-band modes get mild damping variation; the top
    // two are load-independent, keeping the overall parameter degree low
    // enough for compact exact rational fits.
    ParametricPlant plant;
    plant.modal.p_min = 0.00065;
    plant.modal.p_max = 0.01;
    plant.modal.modes = {
        {5.6, 4.8, 0.010, 0.030, 1.00},
        {18.0, 18.0, 0.020, 0.026, 0.35},
        {33.0, 33.0, 0.018, 0.024, 0.25},
        {55.0, 55.0, 0.020, 0.020, 0.18},
        {85.0, 85.0, 0.025, 0.025, 0.12},
    };
    plant.noise_std = 0.0;
    return plant;
}

cplx plant_frf_at(const ParametricPlant& plant, double freq_hz, double p) {
    check_p(plant.modal, p);
    if (freq_hz == 0.0) return cplx(0.0, 0.0); // mobility: s factor in the numerator
    const cplx s(0.0, kTwoPi * freq_hz);
    cplx acc(0.0, 0.0);
    for (std::size_t m = 0; m < plant.modal.modes.size(); ++m) {
        const double w = kTwoPi * plant.modal.mode_freq_hz(m, p);
        const double z = plant.modal.mode_zeta(m, p);
        acc += plant.modal.modes[m].residue_gain * s / (s * s + 2.0 * z * w * s + w * w);
    }
    return acc;
}

Spectrum plant_frf(const ParametricPlant& plant, const std::vector<double>& freq_hz, double p) {
    check_p(plant.modal, p);
    Spectrum spec;
    spec.freq_hz = freq_hz;
    spec.df_hz = freq_hz.size() > 1 ? freq_hz[1] - freq_hz[0] : 0.0;
    spec.values.resize(freq_hz.size());
    for (std::size_t k = 0; k < freq_hz.size(); ++k)
        spec.values[k] = plant_frf_at(plant, freq_hz[k], p);
    return spec;
}

std::vector<double> gaussian_noise(std::size_t n, double std_dev, std::uint64_t seed) {
    std::vector<double> out(n, 0.0);
    if (std_dev == 0.0 || n == 0) return out;
    std::mt19937_64 rng(seed);
    // Box-Muller on explicitly constructed uniforms; fully specified, so
    // results are identical across standard libraries
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    };
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = kTwoPi * u2;
        out[i] = std_dev * r * std::cos(theta);
        if (i + 1 < n) out[i + 1] = std_dev * r * std::sin(theta);
    }
    return out;
}

TimeSeries simulate_response(const ParametricPlant& plant, const TimeSeries& force,
                             double p, std::uint64_t seed) {
    force.validate();
    check_p(plant.modal, p);

    Spectrum f_spec = fft_spectrum(force);
    for (std::size_t k = 0; k < f_spec.values.size(); ++k)
        f_spec.values[k] *= plant_frf_at(plant, f_spec.freq_hz[k], p);
    // DC and Nyquist of a real signal are real; only the real part of the
    // FRF response can exist there
    f_spec.values.front() = cplx(f_spec.values.front().real(), 0.0);
    if (force.samples.size() % 2 == 0)
        f_spec.values.back() = cplx(f_spec.values.back().real(), 0.0);

    TimeSeries vel = ifft_real(f_spec, force.samples.size(), force.sample_rate_hz);
    vel.start_time_s = force.start_time_s;
    if (plant.noise_std > 0.0) {
        const std::vector<double> noise = gaussian_noise(vel.samples.size(), plant.noise_std, seed);
        for (std::size_t i = 0; i < vel.samples.size(); ++i) vel.samples[i] += noise[i];
    }
    return vel;
}

} // namespace boomid
