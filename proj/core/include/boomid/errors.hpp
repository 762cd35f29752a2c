#ifndef BOOMID_ERRORS_HPP
#define BOOMID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace boomid {

// Precondition violations reuse std::invalid_argument. Everything that can
// fail *after* valid inputs gets a named type so callers (and the CLI exit
// codes) can tell the failure modes apart.

/// A numeric consistency check failed (e.g. inverse transform of a spectrum
/// that is not conjugate-symmetric within tolerance).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Averaged force auto-spectrum vanished at some bin; H1 is undefined there.
class degenerate_excitation_error : public std::runtime_error {
public:
    degenerate_excitation_error(const std::string& what, std::size_t bin)
        : std::runtime_error(what), bin_index(bin) {}
    std::size_t bin_index;
};

/// A least-squares system inside an iterative fit lost rank.
class rank_deficiency_error : public std::runtime_error {
public:
    rank_deficiency_error(const std::string& what, int iteration)
        : std::runtime_error(what), iteration(iteration) {}
    int iteration;
};

/// Rational model evaluated exactly at one of its poles.
class pole_collision_error : public std::runtime_error {
public:
    explicit pole_collision_error(const std::string& what) : std::runtime_error(what) {}
};

/// |H| = 0 at a bin during unregularized spectral division.
class division_singularity_error : public std::runtime_error {
public:
    division_singularity_error(const std::string& what, double freq_hz)
        : std::runtime_error(what), freq_hz(freq_hz) {}
    double freq_hz;
};

/// Reference signal of a relative error metric is identically zero.
class degenerate_reference_error : public std::runtime_error {
public:
    explicit degenerate_reference_error(const std::string& what) : std::runtime_error(what) {}
};

/// p-AAA ran out of data to fit (LS set empty before tolerance was met).
class order_exhausted_error : public std::runtime_error {
public:
    explicit order_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter query outside the configured extrapolation guard.
class out_of_range_error : public std::runtime_error {
public:
    explicit out_of_range_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace boomid

#endif
