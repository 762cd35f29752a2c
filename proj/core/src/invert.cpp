#include "boomid/invert.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boomid/errors.hpp"

namespace boomid {

TimeSeries invert_force(const TimeSeries& velocity, const FrfFunction& frf,
                        const InversionOptions& opts) {
    velocity.validate();
    if (velocity.samples.size() < 2)
        throw std::invalid_argument("invert_force: velocity record too short");
    if (opts.magnitude_floor < 0.0 || opts.regularization_eps < 0.0)
        throw std::invalid_argument("invert_force: floor/eps must be nonnegative");
    if (opts.magnitude_floor > 0.0 && opts.regularization_eps > 0.0)
        throw std::invalid_argument("invert_force: at most one of floor/eps may be set");

    TimeSeries vel = velocity;
    if (opts.detrend) {
        const double mean = std::accumulate(vel.samples.begin(), vel.samples.end(), 0.0) /
                            static_cast<double>(vel.samples.size());
        for (double& x : vel.samples) x -= mean;
    }

    const std::size_t n = vel.samples.size();
    Spectrum v_spec = fft_spectrum(vel);
    Spectrum f_spec = v_spec;

    const double eps = opts.regularization_eps;
    const bool even = (n % 2 == 0);
    for (std::size_t k = 0; k < v_spec.values.size(); ++k) {
        const double f = v_spec.freq_hz[k];
        cplx h = frf(f);
        const bool boundary = (k == 0) || (even && k == v_spec.values.size() - 1);
        // DC and Nyquist of a real signal are real: only the real part of
        // the FRF acts there (mirrors the forward simulation)
        if (boundary) h = cplx(h.real(), 0.0);
        const double mag = std::abs(h);

        if (eps > 0.0) {
            f_spec.values[k] = v_spec.values[k] * std::conj(h) / (mag * mag + eps * eps);
            continue;
        }
        if (opts.magnitude_floor > 0.0 && mag < opts.magnitude_floor) {
            h = (mag > 0.0) ? h * (opts.magnitude_floor / mag)
                            : cplx(opts.magnitude_floor, 0.0);
        }
        if (std::abs(h) == 0.0) {
            if (boundary) {
                // strictly proper / DC-vanishing model: the bin carries no
                // recoverable information, force it to zero
                f_spec.values[k] = cplx(0.0, 0.0);
                continue;
            }
            throw division_singularity_error(
                "invert_force: |H| = 0 at " + std::to_string(f) + " Hz", f);
        }
        f_spec.values[k] = v_spec.values[k] / h;
    }
    // DC and Nyquist of a real force are real; drop the unrealizable part
    f_spec.values.front() = cplx(f_spec.values.front().real(), 0.0);
    if (even) f_spec.values.back() = cplx(f_spec.values.back().real(), 0.0);

    TimeSeries force = ifft_real(f_spec, n, vel.sample_rate_hz);
    force.start_time_s = velocity.start_time_s;
    return force;
}

double relative_l2(const TimeSeries& estimated, const TimeSeries& measured) {
    if (estimated.samples.size() != measured.samples.size())
        throw std::invalid_argument("relative_l2: length mismatch");
    if (estimated.sample_rate_hz != measured.sample_rate_hz)
        throw std::invalid_argument("relative_l2: sample-rate mismatch");

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < measured.samples.size(); ++i) {
        const double d = estimated.samples[i] - measured.samples[i];
        num += d * d;
        den += measured.samples[i] * measured.samples[i];
    }
    if (den == 0.0)
        throw degenerate_reference_error("relative_l2: measured signal is identically zero");
    return std::sqrt(num / den);
}

CrossValMatrix cross_validate(const std::vector<FrfFunction>& models,
                              const std::vector<double>& model_params,
                              const std::vector<TimeSeries>& test_forces,
                              const std::vector<TimeSeries>& test_velocities,
                              const std::vector<double>& test_params,
                              const InversionOptions& opts) {
    if (models.empty() || test_forces.empty())
        throw std::invalid_argument("cross_validate: need at least one model and one test set");
    if (models.size() != model_params.size())
        throw std::invalid_argument("cross_validate: model/param count mismatch");
    if (test_forces.size() != test_velocities.size() || test_forces.size() != test_params.size())
        throw std::invalid_argument("cross_validate: test set sizes mismatch");

    CrossValMatrix out;
    out.model_params = model_params;
    out.test_params = test_params;
    out.cells.resize(models.size() * test_forces.size());
    out.model_totals.assign(models.size(), 0.0);

    for (std::size_t m = 0; m < models.size(); ++m) {
        for (std::size_t t = 0; t < test_forces.size(); ++t) {
            CrossValCell& cell = out.cells[m * test_forces.size() + t];
            try {
                TimeSeries est = invert_force(test_velocities[t], models[m], opts);
                cell.e_l2 = relative_l2(est, test_forces[t]);
            } catch (const std::exception& e) {
                cell.e_l2 = std::numeric_limits<double>::infinity();
                cell.failure = e.what();
            }
            out.model_totals[m] += cell.e_l2;
        }
    }
    return out;
}

} // namespace boomid
