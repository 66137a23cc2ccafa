#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chsq/types.hpp"

// The measurement chain: periodograms from photocurrents, vacuum
// normalization, theta extraction from the heterodyne beat, cosine fits of
// the noise modulation, magnitude/phase reconstruction of phi_N, and the
// saturable Lambert-Beer fit of (beta, N).

namespace chsq {

// One-sided averaged periodogram, mean over records of |DFT|^2 / n.
struct PowerSpectrum {
    double sample_rate_hz = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_records = 0;
    std::vector<double> freq_hz;  // bins 0..n/2
    std::vector<double> values;
};

// Streaming accumulator so large runs never hold all records at once.
class PeriodogramAccumulator {
public:
    PeriodogramAccumulator(double sample_rate_hz, std::size_t n_samples, bool hann_window = false);
    void add(const std::vector<double>& record);
    PowerSpectrum result() const;

private:
    double sample_rate_hz_;
    std::size_t n_samples_;
    bool hann_;
    std::size_t count_ = 0;
    std::vector<double> sum_;
    std::vector<double> window_;
    double window_norm_ = 1.0;
};

// Plain rectangular periodogram by default; Hann windowing available behind
// the flag but off for bit-comparability with the FFT-ratio definition.
PowerSpectrum averaged_periodogram(const std::vector<std::vector<double>>& records,
                                   double sample_rate_hz, bool hann_window = false);

// Vacuum-normalized spectra: s_tilde = probe/vacuum per bin, s = (s_tilde-1)/4.
struct MeasuredSqueezing {
    std::vector<double> freq_hz;
    std::vector<double> s_tilde;
    std::vector<double> s_normal;
    std::size_t n_records_probe = 0;
    std::size_t n_records_vacuum = 0;

    // statistical standard error of the averaged s_tilde at a bin
    double se_tilde(std::size_t i) const;
};

MeasuredSqueezing normalized_squeezing_spectrum(const PowerSpectrum& probe,
                                                const PowerSpectrum& vacuum);

// Phase of the DFT coefficient at f_het; requires f_het on (or within 10% of
// a bin of) the FFT grid and beat SNR > 10. Result in [0, 2pi).
double extract_theta(const std::vector<double>& beat, double sample_rate_hz, double f_het_hz);

// Mean of s_tilde over bins with f in [f_min, f_max]; throws on empty band.
double band_noise(const MeasuredSqueezing& spec, double f_min_hz, double f_max_hz);
double band_mean(const std::vector<double>& freq_hz, const std::vector<double>& values,
                 double f_min_hz, double f_max_hz);

struct NoisePoint {
    double theta = 0.0;
    double noise = 0.0;   // band-averaged, vacuum-normalized
    double weight = 1.0;  // inverse variance
};

struct FitResult {
    std::vector<std::string> param_names;
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double residual_rms = 0.0;
    bool converged = false;
    int n_iter = 0;

    double param(const std::string& name) const;
    double variance(const std::string& name) const;
};

// Weighted fit of -A cos(2 theta + varphi) + c. Initialized from the
// quadrature projections onto cos/sin(2 theta); Gauss-Newton refinement,
// |step| < 1e-10 or 200 iterations. A is reported >= 0 with varphi adjusted;
// for A ~ 0 the phase is unconstrained and its variance is set to infinity.
FitResult fit_cosine(const std::vector<NoisePoint>& points);

// Per-frequency-bin cosine fit of S vs theta, y = a cos2t + b sin2t + c,
// accumulated as sufficient statistics (streaming, O(bins) memory).
class ThetaBinFitAccumulator {
public:
    explicit ThetaBinFitAccumulator(std::size_t n_bins);
    void add(double theta, const std::vector<double>& s_values, double weight = 1.0);
    std::size_t n_bins() const { return syc_.size(); }
    std::size_t n_samples() const { return n_; }

    struct BinFit {
        double a = 0.0, b = 0.0, c = 0.0;
        double var_a = 0.0, var_b = 0.0, cov_ab = 0.0;
        std::size_t n = 0;
        bool ok = false;
    };
    std::vector<BinFit> finalize() const;

private:
    std::size_t n_ = 0;
    double sw_ = 0, sc_ = 0, ss_ = 0, scc_ = 0, scs_ = 0, sss_ = 0;
    std::vector<double> syc_, sys_, sy_, syy_;
};

struct PhaseSpectrum {
    std::vector<double> freq_hz;
    std::vector<double> phase;      // varphi_N(omega); masked bins NaN
    std::vector<double> amplitude;  // fitted A(omega) >= 0
    std::vector<bool> masked;
    std::size_t n_masked = 0;
};

// Per-bin phase of phi_N from the theta modulation of S (>=6 theta samples
// per bin required; non-converged bins are masked and counted).
PhaseSpectrum reconstruct_phase(const ThetaBinFitAccumulator& acc,
                                const std::vector<double>& freq_hz);

struct MagnitudeSpectrum {
    std::vector<double> freq_hz;
    std::vector<double> magnitude;  // |phi_N(omega)|, 1/Gamma units; masked bins NaN
    std::vector<bool> masked;
    std::size_t n_masked = 0;
};

// |phi_N(omega)| = (16 beta / (s eta)) * mean_i |S_i(omega)| over the four
// quadrature angles {0, pi/2, pi, 3pi/2}. Missing angles raise an error that
// lists them. Bins where the four samples violate the expected sign pattern
// (S at theta and theta+pi equal, quadrature pairs opposite) beyond 3 sigma
// are masked.
MagnitudeSpectrum reconstruct_magnitude(
    const std::array<std::optional<MeasuredSqueezing>, 4>& spectra_by_angle, const Drive& drive,
    const EmitterEnsemble& ens, double eta);

// Complex phi_N(omega) on the measured bins, from the linear per-bin fit:
// phi = (16 beta/(s eta)) (-a + i b), with propagated variances.
struct ComplexReconstruction {
    std::vector<double> freq_hz;
    std::vector<Complex> phi;
    std::vector<double> var_re, var_im;
    std::vector<bool> masked;
};

ComplexReconstruction reconstruct_complex_spectrum(const ThetaBinFitAccumulator& acc,
                                                   const std::vector<double>& freq_hz,
                                                   const Drive& drive, const EmitterEnsemble& ens,
                                                   double eta);

// phi_N(tau) = (1/pi) Int_0^inf phi_N(omega) cos(omega tau) domega over the
// measured one-sided bins, with pointwise standard errors (bins independent).
struct ReconstructedWavefunction {
    std::vector<double> tau;  // units 1/Gamma
    std::vector<Complex> values;
    std::vector<double> se_re, se_im;
};

ReconstructedWavefunction reconstruct_time_domain(const ComplexReconstruction& rec,
                                                  double gamma_tot,
                                                  const std::vector<double>& tau_grid);

// Saturable transmission fit. Input powers are physical (W); the model is
// T = W(s e^{s - 4 beta N})/s with s = 8 beta P / (E_photon Gamma_tot), so
// beta enters both the optical depth and the saturation scale.
struct TransmissionPoint {
    double power_w = 0.0;
    double transmission = 0.0;
    double sigma = 0.0;  // absolute standard deviation of T; 0 = unweighted
};

FitResult fit_beta_n(const std::vector<TransmissionPoint>& points, double gamma_tot_rad_s,
                     double photon_energy_j);

}  // namespace chsq
