#include "boomid/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "boomid/errors.hpp"

namespace boomid {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Bluestein's algorithm: arbitrary-length DFT as a power-of-two convolution.
void fft_bluestein(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the chirp argument small for large n
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
        w[k] = cplx(std::cos(ang), std::sin(ang));
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cplx> b(m, cplx(0.0, 0.0)), c(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) b[k] = a[k] * w[k];
    c[0] = std::conj(w[0]);
    for (std::size_t k = 1; k < n; ++k) c[k] = c[m - k] = std::conj(w[k]);
    fft_pow2(b, false);
    fft_pow2(c, false);
    for (std::size_t k = 0; k < m; ++k) b[k] *= c[k];
    fft_pow2(b, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = b[k] * w[k] * scale;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double rms_of(const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss / static_cast<double>(v.size()));
}

} // namespace

namespace detail {

void dft_inplace(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (is_pow2(n)) {
        fft_pow2(data, inverse);
    } else {
        fft_bluestein(data, inverse);
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : data) x *= scale;
    }
}

} // namespace detail

void TimeSeries::validate() const {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("TimeSeries: sample_rate_hz must be positive");
    if (samples.empty()) throw std::invalid_argument("TimeSeries: samples must be non-empty");
    for (double x : samples) {
        if (!std::isfinite(x)) throw std::invalid_argument("TimeSeries: non-finite sample");
    }
}

void Spectrum::validate() const {
    if (freq_hz.size() != values.size())
        throw std::invalid_argument("Spectrum: freq/value length mismatch");
    if (freq_hz.empty()) throw std::invalid_argument("Spectrum: empty");
    if (freq_hz.front() != 0.0 && freq_hz.size() > 1) {
        // one-sided FFT spectra start at 0; FRF slices may not, so only the
        // uniformity of the grid is enforced here
    }
    for (std::size_t k = 1; k < freq_hz.size(); ++k) {
        const double step = freq_hz[k] - freq_hz[k - 1];
        if (std::abs(step - df_hz) > 1e-9 * std::max(1.0, std::abs(df_hz)))
            throw std::invalid_argument("Spectrum: non-uniform frequency grid");
    }
}

TimeSeries gen_chirp(double f0_hz, double f1_hz, double duration_s,
                     double sample_rate_hz, double target_rms) {
    if (!(f0_hz > 0.0) || !(f1_hz >= f0_hz))
        throw std::invalid_argument("gen_chirp: need 0 < f0_hz <= f1_hz");
    if (!(duration_s > 0.0)) throw std::invalid_argument("gen_chirp: duration_s must be positive");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("gen_chirp: sample_rate_hz must be positive");
    if (!(target_rms > 0.0)) throw std::invalid_argument("gen_chirp: target_rms must be positive");
    if (f1_hz > sample_rate_hz / 2.0)
        throw std::invalid_argument("gen_chirp: f1_hz above Nyquist");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n == 0) throw std::invalid_argument("gen_chirp: window shorter than one sample");

    TimeSeries ts;
    ts.sample_rate_hz = sample_rate_hz;
    ts.samples.resize(n);
    const double sweep_rate = (f1_hz - f0_hz) / (2.0 * duration_s);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        const double phase = 2.0 * kPi * (f0_hz * t + sweep_rate * t * t);
        ts.samples[i] = std::sin(phase);
    }
    // De-meaning keeps the inversion chain exact at DC (mobility FRFs vanish
    // there); the raw sweep still has phase 0 at t = 0.
    const double m = mean_of(ts.samples);
    for (double& x : ts.samples) x -= m;
    const double r = rms_of(ts.samples);
    if (!(r > 0.0)) throw std::invalid_argument("gen_chirp: degenerate zero waveform");
    const double scale = target_rms / r;
    for (double& x : ts.samples) x *= scale;
    return ts;
}

TimeSeries gen_periodic(WaveShape shape, double freq_hz, double duration_s,
                        double sample_rate_hz, double target_rms) {
    if (shape == WaveShape::periodic_chirp)
        throw std::invalid_argument("gen_periodic: use gen_chirp for chirp signals");
    if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0))
        throw std::invalid_argument("gen_periodic: freq_hz must lie in (0, Nyquist)");
    if (!(duration_s > 0.0)) throw std::invalid_argument("gen_periodic: duration_s must be positive");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("gen_periodic: sample_rate_hz must be positive");
    if (!(target_rms > 0.0)) throw std::invalid_argument("gen_periodic: target_rms must be positive");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n == 0) throw std::invalid_argument("gen_periodic: window shorter than one sample");

    TimeSeries ts;
    ts.sample_rate_hz = sample_rate_hz;
    ts.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cycles = freq_hz * static_cast<double>(i) / sample_rate_hz;
        const double u = cycles - std::floor(cycles); // phase in [0, 1)
        double x = 0.0;
        switch (shape) {
            case WaveShape::sine:
                x = target_rms * std::numbers::sqrt2 * std::sin(2.0 * kPi * u);
                break;
            case WaveShape::triangle: {
                // piecewise-linear phase map, peaks +-1 at u = 1/4, 3/4
                double t;
                if (u < 0.25) t = 4.0 * u;
                else if (u < 0.75) t = 2.0 - 4.0 * u;
                else t = 4.0 * u - 4.0;
                x = target_rms * std::numbers::sqrt3 * t;
                break;
            }
            case WaveShape::square:
                // rising crossing (u = 0) takes +A; the half-period point
                // takes -A so even samples-per-period stays exactly zero-mean
                x = (u < 0.5) ? target_rms : -target_rms;
                break;
            case WaveShape::periodic_chirp:
                break; // unreachable
        }
        ts.samples[i] = x;
    }
    return ts;
}

Spectrum fft_spectrum(const TimeSeries& ts) {
    ts.validate();
    const std::size_t n = ts.samples.size();
    if (n < 2) throw std::invalid_argument("fft_spectrum: need at least 2 samples");
    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cplx(ts.samples[i], 0.0);
    detail::dft_inplace(buf, false);

    Spectrum spec;
    spec.df_hz = ts.sample_rate_hz / static_cast<double>(n);
    const std::size_t n_bins = n / 2 + 1;
    spec.freq_hz.resize(n_bins);
    spec.values.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        spec.freq_hz[k] = static_cast<double>(k) * spec.df_hz;
        spec.values[k] = buf[k];
    }
    return spec;
}

TimeSeries ifft_real(const Spectrum& spec, std::size_t n_samples, double sample_rate_hz) {
    if (n_samples < 2) throw std::invalid_argument("ifft_real: need at least 2 samples");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("ifft_real: sample_rate_hz must be positive");
    if (spec.values.size() != n_samples / 2 + 1)
        throw std::invalid_argument("ifft_real: spectrum length inconsistent with n_samples");

    double max_abs = 0.0;
    for (const cplx& v : spec.values) max_abs = std::max(max_abs, std::abs(v));
    const double imag_tol = 1e-8 * std::max(max_abs, 1e-300);
    if (std::abs(spec.values.front().imag()) > imag_tol)
        throw numerical_error("ifft_real: DC bin has significant imaginary part");
    const bool even = (n_samples % 2 == 0);
    if (even && std::abs(spec.values.back().imag()) > imag_tol)
        throw numerical_error("ifft_real: Nyquist bin has significant imaginary part");

    std::vector<cplx> buf(n_samples);
    buf[0] = cplx(spec.values.front().real(), 0.0);
    const std::size_t half = n_samples / 2;
    for (std::size_t k = 1; k < spec.values.size(); ++k) {
        cplx v = spec.values[k];
        if (even && k == half) v = cplx(v.real(), 0.0);
        buf[k] = v;
        buf[n_samples - k] = std::conj(v);
    }
    detail::dft_inplace(buf, true);

    TimeSeries ts;
    ts.sample_rate_hz = sample_rate_hz;
    ts.samples.resize(n_samples);
    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        ts.samples[i] = buf[i].real();
        max_imag = std::max(max_imag, std::abs(buf[i].imag()));
        max_real = std::max(max_real, std::abs(buf[i].real()));
    }
    if (max_imag > 1e-8 * std::max(max_real, 1e-300))
        throw numerical_error("ifft_real: imaginary residue above threshold");
    return ts;
}

} // namespace boomid
