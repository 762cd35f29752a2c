#ifndef BOOMID_SIGNAL_HPP
#define BOOMID_SIGNAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace boomid {

using cplx = std::complex<double>;

/// Uniformly sampled real-valued signal.
struct TimeSeries {
    double sample_rate_hz = 0.0;
    std::vector<double> samples;
    double start_time_s = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    /// Throws std::invalid_argument if the invariants do not hold
    /// (positive rate, non-empty, all samples finite).
    void validate() const;
};

/// One-sided complex spectrum on a uniform frequency grid starting at 0.
/// Convention (fixed repo-wide): values[k] = sum_n x[n] exp(-i 2 pi k n / N),
/// i.e. an unnormalized forward DFT keeping bins k = 0 .. floor(N/2).
struct Spectrum {
    std::vector<double> freq_hz;
    std::vector<cplx> values;
    double df_hz = 0.0;

    std::size_t size() const { return values.size(); }
    void validate() const;
};

enum class WaveShape { periodic_chirp, sine, triangle, square };

/// Linear-frequency sweep f0 -> f1 over the window, phase 0 at t = 0,
/// then de-meaned and rescaled so the time-domain RMS equals target_rms.
/// The sweep window is the analysis window (periodic-chirp convention);
/// last-sample phase continuity is not enforced.
TimeSeries gen_chirp(double f0_hz, double f1_hz, double duration_s,
                     double sample_rate_hz, double target_rms);

/// Zero-mean periodic waveform at freq_hz with analytically set amplitude:
/// sine A = rms*sqrt(2), triangle A = rms*sqrt(3), square A = rms.
/// Square samples landing exactly on a zero crossing take +A.
TimeSeries gen_periodic(WaveShape shape, double freq_hz, double duration_s,
                        double sample_rate_hz, double target_rms);

/// One-sided unnormalized forward DFT of a real series.
Spectrum fft_spectrum(const TimeSeries& ts);

/// Inverse of fft_spectrum. Conjugate symmetry is imposed by construction;
/// the imaginary content of the DC and Nyquist bins must be below 1e-8
/// relative or a numerical_error is thrown.
TimeSeries ifft_real(const Spectrum& spec, std::size_t n_samples, double sample_rate_hz);

namespace detail {
/// In-place complex DFT for arbitrary length (radix-2 when N is a power of
/// two, Bluestein otherwise). inverse=true applies the 1/N scale.
void dft_inplace(std::vector<cplx>& data, bool inverse);
} // namespace detail

} // namespace boomid

#endif
