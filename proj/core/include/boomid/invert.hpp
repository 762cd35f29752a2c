#ifndef BOOMID_INVERT_HPP
#define BOOMID_INVERT_HPP

#include <functional>
#include <string>
#include <vector>

#include "boomid/signal.hpp"

namespace boomid {

/// Univariate FRF evaluated at a physical frequency in Hz (s = i 2 pi f).
using FrfFunction = std::function<cplx(double freq_hz)>;

struct InversionOptions {
    double magnitude_floor = 0.0;    // clamp |H| from below, phase kept
    double regularization_eps = 0.0; // Tikhonov: F = V conj(H)/(|H|^2+eps^2)
    bool detrend = true;             // remove the velocity mean before FFT
};

struct CrossValCell {
    double e_l2 = 0.0;
    std::string failure; // empty on success; e_l2 is +inf otherwise
};

struct CrossValMatrix {
    std::vector<double> model_params;
    std::vector<double> test_params;
    std::vector<CrossValCell> cells; // model outer, test inner
    std::vector<double> model_totals; // sum over tests per model row

    const CrossValCell& at(std::size_t m, std::size_t t) const {
        return cells[m * test_params.size() + t];
    }
};

/// Frequency-domain inversion: F(bin) = V(bin)/H(f_bin), DC (and Nyquist,
/// when the model vanishes there) forced to zero, inverse-transformed to
/// time. Plain division by default; see InversionOptions for the
/// regularized variants.
TimeSeries invert_force(const TimeSeries& velocity, const FrfFunction& frf,
                        const InversionOptions& opts = {});

/// sqrt( sum |est - ref|^2 / sum |ref|^2 ). Throws
/// degenerate_reference_error when the reference is identically zero.
double relative_l2(const TimeSeries& estimated, const TimeSeries& measured);

/// errors[m][t] = relative_l2(invert_force(velocity_t, model_m), force_t).
/// A failing cell records +inf and the reason; the matrix never aborts.
CrossValMatrix cross_validate(const std::vector<FrfFunction>& models,
                              const std::vector<double>& model_params,
                              const std::vector<TimeSeries>& test_forces,
                              const std::vector<TimeSeries>& test_velocities,
                              const std::vector<double>& test_params,
                              const InversionOptions& opts = {});

} // namespace boomid

#endif
