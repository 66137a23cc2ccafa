#pragma once

#include <cstdint>
#include <vector>

#include "chsq/physics.hpp"
#include "chsq/traces.hpp"
#include "chsq/types.hpp"

// Synthetic balanced-homodyne photocurrents. Shot noise is normalized to 1
// (currents are dimensionless); the vacuum normalization downstream removes
// any absolute gain anyway.

namespace chsq {

struct SynthConfig {
    EmitterEnsemble ensemble;
    Drive drive;
    double eta = 1.0;              // detection efficiency
    double electronic_noise = 0.0; // additive white variance, relative to shot noise
    double f_het_hz = 1.0e6;       // heterodyne beat frequency
    int n_repetitions = 1;         // measurement cycles (probe+beat+vacuum each)
    double duration_s = 41.0e-6;   // per record
    double sample_rate_hz = 100.0e6;
    double beat_amplitude = 200.0; // beat SNR knob, in shot-noise units

    std::size_t samples_per_record() const {
        return static_cast<std::size_t>(duration_s * sample_rate_hz + 0.5);
    }
    void validate() const;
};

// Stationary real Gaussian sequence whose periodogram expectation equals the
// (vacuum-normalized, symmetric-ordered) target PSD: independent complex
// Gaussian FFT coefficients with variance n*S(f_bin), Hermitian symmetry,
// inverse transform. Target bins are linearly interpolated on |omega|/Gamma,
// flat beyond the grid edges. Throws on negative target bins.
std::vector<double> shape_gaussian_process(const SqueezingSpectrum& target, double gamma_tot,
                                           double sample_rate_hz, std::size_t n_samples,
                                           std::uint64_t seed);

// Precomputed per-config state (composed phi_N on a grid wide enough for the
// Nyquist range).
struct SynthContext {
    SynthConfig cfg;
    ComplexSpectrum phi;

    explicit SynthContext(const SynthConfig& c, const FrequencyGrid* grid = nullptr);

    // vacuum-normalized probe PSD 1 + 4 eta S_theta + electronic_noise
    SqueezingSpectrum probe_target(double theta) const;
    SqueezingSpectrum vacuum_target() const;
};

// One record; record_index enters the per-record seed (seed ^ index) so
// parallel generation order cannot change the output.
std::vector<double> synthesize_record(const SynthContext& ctx, TraceKind kind, double theta,
                                      std::uint64_t record_index, std::uint64_t seed);

// One probe + beat + vacuum triple per schedule entry, deterministic in seed.
TraceSet synthesize_run(const SynthConfig& cfg, const std::vector<double>& theta_schedule,
                        std::uint64_t seed);

// theta values cycling uniformly over [0, 2pi): entry i = 2pi (i mod k) / k.
std::vector<double> uniform_theta_schedule(int n_repetitions, int theta_points);

}  // namespace chsq
