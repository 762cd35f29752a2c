#ifndef BOOMID_PLANT_HPP
#define BOOMID_PLANT_HPP

#include <cstdint>
#include <vector>

#include "boomid/signal.hpp"

namespace boomid {

/// One structural mode with affine load dependence of its natural
/// frequency and damping ratio over [p_min, p_max].
struct Mode {
    double freq_at_pmin_hz = 0.0;
    double freq_at_pmax_hz = 0.0;
    double zeta_at_pmin = 0.0;
    double zeta_at_pmax = 0.0;
    double residue_gain = 0.0;
};

struct ModalParams {
    std::vector<Mode> modes; // sorted by natural frequency at p_min
    double p_min = 0.0;
    double p_max = 0.0;

    double mode_freq_hz(std::size_t m, double p) const;
    double mode_zeta(std::size_t m, double p) const;
};

/// Load-parameterized modal mobility model used as the ground-truth oracle:
/// H(s, p) = sum_m g_m s / (s^2 + 2 zeta_m(p) w_m(p) s + w_m(p)^2).
struct ParametricPlant {
    ModalParams modal;
    double noise_std = 0.0; // additive output-velocity noise
};

/// Five-mode mobility plant on p in [0.00065, 0.01] N RMS. Mode 1 sweeps
/// 5.6 -> 4.8 Hz with damping 1% -> 3%; the higher modes sit at fixed
/// frequencies in [15, 90] Hz, two of them with mild damping variation.
ParametricPlant default_boom_plant();

/// Exact closed-form FRF samples; exactly 0 at f = 0.
Spectrum plant_frf(const ParametricPlant& plant, const std::vector<double>& freq_hz, double p);

cplx plant_frf_at(const ParametricPlant& plant, double freq_hz, double p);

/// Exact frequency-domain simulation V = H . F plus seeded Gaussian output
/// noise of std plant.noise_std. Deterministic for a fixed seed.
TimeSeries simulate_response(const ParametricPlant& plant, const TimeSeries& force,
                             double p, std::uint64_t seed);

/// Seeded standard-normal samples (Box-Muller over a 64-bit Mersenne
/// Twister stream, fully specified so outputs are platform-stable).
std::vector<double> gaussian_noise(std::size_t n, double std_dev, std::uint64_t seed);

} // namespace boomid

#endif
