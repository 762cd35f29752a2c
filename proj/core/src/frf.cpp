#include "boomid/frf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "boomid/errors.hpp"

namespace boomid {

void FrfDataset::validate() const {
    if (params.empty()) throw std::invalid_argument("FrfDataset: need at least one parameter column");
    if (freq_hz.empty()) throw std::invalid_argument("FrfDataset: empty frequency grid");
    if (values.size() != freq_hz.size() * params.size())
        throw std::invalid_argument("FrfDataset: value matrix shape mismatch");
    for (std::size_t k = 1; k < params.size(); ++k)
        if (!(params[k] > params[k - 1]))
            throw std::invalid_argument("FrfDataset: params must be strictly increasing");
    for (std::size_t j = 1; j < freq_hz.size(); ++j)
        if (!(freq_hz[j] > freq_hz[j - 1]))
            throw std::invalid_argument("FrfDataset: frequency grid must be ascending");
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("FrfDataset: NaN/Inf entry");
}

Spectrum h1_estimate(const std::vector<Spectrum>& force_blocks,
                     const std::vector<Spectrum>& vel_blocks) {
    if (force_blocks.empty() || force_blocks.size() != vel_blocks.size())
        throw std::invalid_argument("h1_estimate: need matching non-empty block lists");
    const Spectrum& ref = force_blocks.front();
    const std::size_t n = ref.values.size();
    for (const auto* blocks : {&force_blocks, &vel_blocks}) {
        for (const Spectrum& b : *blocks) {
            if (b.values.size() != n || b.freq_hz != ref.freq_hz)
                throw std::invalid_argument("h1_estimate: blocks on mismatched frequency grids");
        }
    }

    std::vector<cplx> g_vf(n, cplx(0.0, 0.0));
    std::vector<double> g_ff(n, 0.0);
    for (std::size_t b = 0; b < force_blocks.size(); ++b) {
        const auto& f = force_blocks[b].values;
        const auto& v = vel_blocks[b].values;
        for (std::size_t k = 0; k < n; ++k) {
            g_vf[k] += v[k] * std::conj(f[k]);
            g_ff[k] += std::norm(f[k]);
        }
    }

    Spectrum out;
    out.freq_hz = ref.freq_hz;
    out.df_hz = ref.df_hz;
    out.values.resize(n);
    const double nb = static_cast<double>(force_blocks.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (g_ff[k] == 0.0)
            throw degenerate_excitation_error(
                "h1_estimate: zero force auto-spectrum at bin " + std::to_string(k) +
                " (" + std::to_string(ref.freq_hz[k]) + " Hz)", k);
        out.values[k] = (g_vf[k] / nb) / (g_ff[k] / nb);
    }
    return out;
}

namespace {

template <typename T>
std::vector<T> smooth_impl(const std::vector<T>& values, double sigma_bins) {
    if (!(sigma_bins > 0.0)) throw std::invalid_argument("gaussian_smooth: sigma_bins must be positive");
    if (values.empty()) throw std::invalid_argument("gaussian_smooth: empty sequence");

    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma_bins));
    std::vector<double> kernel(2 * radius + 1);
    for (std::ptrdiff_t m = -radius; m <= radius; ++m)
        kernel[m + radius] = std::exp(-static_cast<double>(m * m) / (2.0 * sigma_bins * sigma_bins));

    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<T> out(values.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(-radius, -i);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(radius, n - 1 - i);
        double wsum = 0.0;
        T acc{};
        for (std::ptrdiff_t m = lo; m <= hi; ++m) {
            const double w = kernel[m + radius];
            wsum += w;
            acc += values[i + m] * w;
        }
        out[i] = acc * (1.0 / wsum); // edge renormalization over valid indices
    }
    return out;
}

} // namespace

std::vector<cplx> gaussian_smooth(const std::vector<cplx>& values, double sigma_bins) {
    return smooth_impl(values, sigma_bins);
}

std::vector<double> gaussian_smooth(const std::vector<double>& values, double sigma_bins) {
    return smooth_impl(values, sigma_bins);
}

FrfDataset decimate(const FrfDataset& dataset, std::size_t factor) {
    if (factor < 1) throw std::invalid_argument("decimate: factor must be >= 1");
    if (factor == 1) return dataset;
    dataset.validate();

    FrfDataset out;
    out.params = dataset.params;
    out.meta = dataset.meta;
    const std::size_t np = dataset.params.size();
    for (std::size_t j = 0; j < dataset.freq_hz.size(); j += factor) {
        out.freq_hz.push_back(dataset.freq_hz[j]);
        for (std::size_t k = 0; k < np; ++k) out.values.push_back(dataset.at(j, k));
    }
    return out;
}

double band_rms(const Spectrum& force_spec, std::size_t n_time_samples,
                double band_lo_hz, double band_hi_hz) {
    if (!(band_lo_hz < band_hi_hz)) throw std::invalid_argument("band_rms: band_lo must be < band_hi");
    if (n_time_samples < 2) throw std::invalid_argument("band_rms: n_time_samples must be >= 2");

    const double n = static_cast<double>(n_time_samples);
    const bool even = (n_time_samples % 2 == 0);
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < force_spec.values.size(); ++k) {
        const double f = force_spec.freq_hz[k];
        if (f < band_lo_hz || f > band_hi_hz) continue;
        const bool boundary = (k == 0) || (even && k == n_time_samples / 2);
        const double amp = (boundary ? 1.0 : 2.0) * std::abs(force_spec.values[k]) / n;
        sum_sq += amp * amp;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("band_rms: no bins inside the band");
    return std::sqrt(sum_sq / static_cast<double>(count));
}

FrfDataset estimate_dataset(const std::vector<TimeSeries>& force_records,
                            const std::vector<TimeSeries>& velocity_records,
                            const FrfPipelineOptions& opts) {
    if (force_records.empty() || force_records.size() != velocity_records.size())
        throw std::invalid_argument("estimate_dataset: need matching non-empty record lists");
    if (opts.n_blocks < 1) throw std::invalid_argument("estimate_dataset: n_blocks must be >= 1");

    struct Column {
        double param;
        std::vector<cplx> values;
    };
    std::vector<Column> columns;
    std::vector<double> grid;

    for (std::size_t c = 0; c < force_records.size(); ++c) {
        const TimeSeries& force = force_records[c];
        const TimeSeries& vel = velocity_records[c];
        force.validate();
        vel.validate();
        if (force.samples.size() != vel.samples.size() ||
            force.sample_rate_hz != vel.sample_rate_hz)
            throw std::invalid_argument("estimate_dataset: force/velocity records mismatched");

        const std::size_t block_len = force.samples.size() / opts.n_blocks;
        if (block_len < 2) throw std::invalid_argument("estimate_dataset: blocks too short");

        std::vector<Spectrum> fb(opts.n_blocks), vb(opts.n_blocks);
        double p_acc = 0.0;
        for (std::size_t b = 0; b < opts.n_blocks; ++b) {
            TimeSeries fblk{force.sample_rate_hz,
                            {force.samples.begin() + static_cast<std::ptrdiff_t>(b * block_len),
                             force.samples.begin() + static_cast<std::ptrdiff_t>((b + 1) * block_len)},
                            0.0};
            TimeSeries vblk{vel.sample_rate_hz,
                            {vel.samples.begin() + static_cast<std::ptrdiff_t>(b * block_len),
                             vel.samples.begin() + static_cast<std::ptrdiff_t>((b + 1) * block_len)},
                            0.0};
            fb[b] = fft_spectrum(fblk);
            vb[b] = fft_spectrum(vblk);
            p_acc += band_rms(fb[b], block_len, opts.band_lo_hz, opts.band_hi_hz);
        }
        Spectrum h1 = h1_estimate(fb, vb);

        // band restriction before smoothing so edge renormalization acts on
        // the analysis band, then smoothing, then decimation
        std::vector<double> keep_freq;
        std::vector<cplx> keep_vals;
        for (std::size_t k = 0; k < h1.values.size(); ++k) {
            if (h1.freq_hz[k] >= opts.keep_lo_hz && h1.freq_hz[k] <= opts.keep_hi_hz) {
                keep_freq.push_back(h1.freq_hz[k]);
                keep_vals.push_back(h1.values[k]);
            }
        }
        if (keep_freq.empty()) throw std::invalid_argument("estimate_dataset: empty analysis band");

        if (opts.smooth_sigma_bins > 0.0)
            keep_vals = gaussian_smooth(keep_vals, opts.smooth_sigma_bins);

        if (grid.empty()) grid = keep_freq;
        else if (grid != keep_freq)
            throw std::invalid_argument("estimate_dataset: inconsistent frequency grids across records");

        columns.push_back({p_acc / static_cast<double>(opts.n_blocks), std::move(keep_vals)});
    }

    std::sort(columns.begin(), columns.end(),
              [](const Column& a, const Column& b) { return a.param < b.param; });
    for (std::size_t k = 1; k < columns.size(); ++k)
        if (!(columns[k].param > columns[k - 1].param))
            throw std::invalid_argument("estimate_dataset: duplicate load parameter values");

    FrfDataset out;
    out.freq_hz = grid;
    for (const Column& col : columns) out.params.push_back(col.param);
    out.values.resize(grid.size() * columns.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        for (std::size_t k = 0; k < columns.size(); ++k)
            out.at(j, k) = columns[k].values[j];

    out = decimate(out, std::max<std::size_t>(1, opts.decimate_factor));
    out.validate();
    return out;
}

} // namespace boomid
