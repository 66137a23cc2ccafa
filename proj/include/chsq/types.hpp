#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for the chiral-chain squeezing toolkit.
//
// Unit conventions used throughout the library:
//   - frequency grids and detunings attached to spectra are dimensionless,
//     expressed in units of the total decay rate Gamma_tot;
//   - the two-photon spectrum phi_N(omega) carries units of 1/Gamma_tot
//     (delays tau are in units of 1/Gamma_tot, group velocity absorbed);
//   - squeezing spectra are dimensionless (shot noise == 1 after the
//     vacuum normalization downstream).
// Physical rates (rad/s, Hz) appear only in EmitterEnsemble::gamma_tot and
// in the trace/synthesizer layer, which converts at the boundary.

namespace chsq {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

using Complex = std::complex<double>;
using Warnings = std::vector<std::string>;

// Parameters of the coupled atom chain.
struct EmitterEnsemble {
    double beta = 0.0;       // coupling fraction Gamma_wg / Gamma_tot
    double gamma_tot = 1.0;  // total decay rate (rad/s; 1.0 = natural units)
    double delta = 0.0;      // drive detuning from atomic resonance (same units as gamma_tot)
    int n_atoms = 0;

    void validate() const {
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::invalid_argument("EmitterEnsemble: beta must be in [0,1]");
        if (!(gamma_tot > 0.0))
            throw std::invalid_argument("EmitterEnsemble: gamma_tot must be positive");
        if (n_atoms < 0)
            throw std::invalid_argument("EmitterEnsemble: n_atoms must be >= 0");
    }
    double delta_over_gamma() const { return delta / gamma_tot; }
};

// Coherent drive: saturation parameter and LO phase.
struct Drive {
    double s = 0.0;      // P_in / P_sat
    double theta = 0.0;  // LO-probe relative phase, reduced to [0, 2pi)
    double p_sat = 0.0;  // optional saturation power (W); 0 = unset

    Drive() = default;
    Drive(double s_, double theta_, double p_sat_ = 0.0) : s(s_), p_sat(p_sat_) {
        if (!(s >= 0.0)) throw std::invalid_argument("Drive: s must be >= 0");
        theta = std::fmod(theta_, two_pi);
        if (theta < 0.0) theta += two_pi;
    }

    double power_to_s(double p_in) const {
        if (p_sat <= 0.0) throw std::invalid_argument("Drive: p_sat not set");
        return p_in / p_sat;
    }
    double s_to_power(double s_val) const {
        if (p_sat <= 0.0) throw std::invalid_argument("Drive: p_sat not set");
        return s_val * p_sat;
    }
};

// Uniform frequency grid, symmetric about zero (units of Gamma_tot).
struct FrequencyGrid {
    std::vector<double> omega;
    double d_omega = 0.0;

    static FrequencyGrid uniform(double omega_max, std::size_t n_points) {
        if (n_points < 2) throw std::invalid_argument("FrequencyGrid: need >= 2 points");
        if (!(omega_max > 0.0)) throw std::invalid_argument("FrequencyGrid: omega_max must be > 0");
        FrequencyGrid g;
        g.omega.resize(n_points);
        g.d_omega = 2.0 * omega_max / static_cast<double>(n_points - 1);
        for (std::size_t i = 0; i < n_points; ++i)
            g.omega[i] = -omega_max + g.d_omega * static_cast<double>(i);
        // force exact symmetry against rounding
        for (std::size_t i = 0; i < n_points / 2; ++i)
            g.omega[n_points - 1 - i] = -g.omega[i];
        if (n_points % 2 == 1) g.omega[n_points / 2] = 0.0;
        return g;
    }

    std::size_t size() const { return omega.size(); }

    void validate() const {
        if (omega.size() < 2) throw std::invalid_argument("FrequencyGrid: too few points");
        const double d = omega[1] - omega[0];
        if (!(d > 0.0)) throw std::invalid_argument("FrequencyGrid: not increasing");
        for (std::size_t i = 1; i < omega.size(); ++i) {
            const double di = omega[i] - omega[i - 1];
            if (std::abs(di - d) > 1e-12 * std::max(1.0, std::abs(d)))
                throw std::invalid_argument("FrequencyGrid: spacing not uniform");
        }
        const std::size_t n = omega.size();
        for (std::size_t i = 0; i < n / 2; ++i) {
            if (std::abs(omega[i] + omega[n - 1 - i]) > 1e-9 * std::max(1.0, std::abs(omega[i])))
                throw std::invalid_argument("FrequencyGrid: not symmetric about zero");
        }
    }

    // trapezoid quadrature weight for point i
    double weight(std::size_t i) const {
        return (i == 0 || i + 1 == omega.size()) ? 0.5 * d_omega : d_omega;
    }
};

// Complex-valued function on a frequency grid; hosts phi_N(omega).
// Fourier convention: phi(omega) = integral phi(tau) e^{-i omega tau} dtau.
struct ComplexSpectrum {
    FrequencyGrid grid;
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }
    void validate() const {
        grid.validate();
        if (values.size() != grid.size())
            throw std::invalid_argument("ComplexSpectrum: value/grid length mismatch");
    }
};

// phi_N(tau) on a delay grid (units 1/Gamma_tot).
struct TimeDomainWavefunction {
    std::vector<double> tau;
    std::vector<Complex> values;
};

enum class Ordering { normal, symmetric };  // S vs S-tilde

// Real squeezing spectrum S_theta(omega) together with the theta it was
// evaluated at. ordering distinguishes the normally ordered S (coherent
// state -> 0, floor -1/4) from the vacuum-normalized S-tilde (S = (St-1)/4).
struct SqueezingSpectrum {
    FrequencyGrid grid;
    std::vector<double> values;
    double theta = 0.0;
    Ordering ordering = Ordering::normal;

    std::size_t size() const { return values.size(); }
    void validate() const {
        grid.validate();
        if (values.size() != grid.size())
            throw std::invalid_argument("SqueezingSpectrum: value/grid length mismatch");
    }
};

}  // namespace chsq
