#ifndef BOOMID_FRF_HPP
#define BOOMID_FRF_HPP

#include <map>
#include <string>
#include <vector>

#include "boomid/signal.hpp"

namespace boomid {

/// FRF samples over a (frequency grid x load parameter) grid.
/// values is row-major Ns x Np: values[j*Np + k] = H(s_j, p_k).
struct FrfDataset {
    std::vector<double> freq_hz;   // uniform ascending, length Ns
    std::vector<double> params;    // strictly increasing, length Np (N RMS units)
    std::vector<cplx> values;      // Ns*Np, row-major (freq outer, param inner)
    std::map<std::string, std::string> meta;

    std::size_t n_freq() const { return freq_hz.size(); }
    std::size_t n_params() const { return params.size(); }
    cplx at(std::size_t j, std::size_t k) const { return values[j * params.size() + k]; }
    cplx& at(std::size_t j, std::size_t k) { return values[j * params.size() + k]; }

    void validate() const;
};

/// Scalar load level: RMS of the force spectrum over a frequency band.
struct LoadParameter {
    double value_n_rms = 0.0;
    double band_lo_hz = 3.0;
    double band_hi_hz = 70.0;
};

/// H1 estimator: mean over blocks of V conj(F) divided by the mean of
/// F conj(F), per bin. All blocks must share one frequency grid.
Spectrum h1_estimate(const std::vector<Spectrum>& force_blocks,
                     const std::vector<Spectrum>& vel_blocks);

/// Discrete Gaussian smoothing, kernel truncated at +-4 sigma and
/// renormalized over valid indices at the edges (no zero-padding bias).
std::vector<cplx> gaussian_smooth(const std::vector<cplx>& values, double sigma_bins);
std::vector<double> gaussian_smooth(const std::vector<double>& values, double sigma_bins);

/// Keeps every factor-th frequency row starting at index 0.
FrfDataset decimate(const FrfDataset& dataset, std::size_t factor);

/// sqrt(mean over in-band bins of |amplitude-corrected F|^2), inclusive
/// bounds. Amplitude correction maps DFT bins to physical sinusoid
/// amplitude: 2|X|/N for interior bins, |X|/N for DC and Nyquist.
double band_rms(const Spectrum& force_spec, std::size_t n_time_samples,
                double band_lo_hz = 3.0, double band_hi_hz = 70.0);

/// Options for the record -> dataset estimation pipeline.
struct FrfPipelineOptions {
    std::size_t n_blocks = 1;       // equal-length non-overlapping blocks
    double smooth_sigma_bins = 8.0; // applied before decimation
    std::size_t decimate_factor = 1;
    double keep_lo_hz = 0.0;        // analysis band retained in the dataset
    double keep_hi_hz = 1e12;
    double band_lo_hz = 3.0;        // load-parameter band
    double band_hi_hz = 70.0;
};

/// Full estimation chain for one set of load cases: block-split, H1,
/// band-RMS parameter extraction, smoothing, band restriction, decimation.
/// Columns are sorted by ascending parameter.
FrfDataset estimate_dataset(const std::vector<TimeSeries>& force_records,
                            const std::vector<TimeSeries>& velocity_records,
                            const FrfPipelineOptions& opts);

} // namespace boomid

#endif
