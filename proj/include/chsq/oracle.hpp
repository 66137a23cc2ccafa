#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "chsq/types.hpp"

// Independent ground truth: cascaded master equation for N chirally coupled
// two-level atoms under weak coherent drive, squeezing spectrum from
// two-time output-field correlations via the quantum regression theorem.
// Everything here works in Gamma_tot = 1 units.

namespace chsq {

struct CascadedSystem {
    int n_atoms = 1;
    double beta = 0.0;
    double delta = 0.0;  // drive detuning, units of Gamma_tot
    double s = 0.0;      // saturation parameter; drive amplitude alpha = sqrt(s/(8 beta))

    void validate() const;
    int hilbert_dim() const { return 1 << n_atoms; }
    int liouville_dim() const { return 1 << (2 * n_atoms); }
};

// Vectorization is column-major: vec(A rho B) = kron(B^T, A) vec(rho).
//
// Generator: H = sum_j [-Delta n_j - i sqrt(G_wg)(alpha sp_j - alpha* sm_j)]
//              - (i G_wg/2) sum_{j<k} (sp_k sm_j - sp_j sm_k)    [k downstream]
// plus independent loss D[sqrt(1-beta) sm_j] and the collective forward
// channel D[sqrt(beta) sum_j sm_j]. Output field b = alpha + sqrt(beta) S.
Eigen::MatrixXcd build_liouvillian(const CascadedSystem& sys);

// max |column sum| of the generator in trace coordinates; 0 for a proper
// trace-preserving generator
double trace_defect(const Eigen::MatrixXcd& liouvillian);

// Steady state from the generator kernel, trace-normalized. kernel_dim
// (optional out) reports the kernel dimension found (uniqueness check).
Eigen::MatrixXcd steady_state(const Eigen::MatrixXcd& liouvillian, int hilbert_dim,
                              int* kernel_dim = nullptr);

struct TwoTimeCorrelations {
    std::vector<double> tau;
    std::vector<Complex> bb;      // <Delta b(tau) Delta b(0)>
    std::vector<Complex> bdag_b;  // <Delta b^dag(tau) Delta b(0)>
};

// Correlators on a uniform tau grid via matrix-exponential propagation
// (one scaling-and-squaring exp of L*dtau, then repeated application).
TwoTimeCorrelations output_correlations(const CascadedSystem& sys, double tau_max = 40.0,
                                        std::size_t n_tau = 2048);

// S_theta(omega) = 2 Int_0^T g(tau) cos(omega tau) dtau,
// g = (1/2) Re[e^{2 i theta} <Db Db>] + (1/2) Re[<Db+ Db>].
// Throws when the correlators have not decayed below 1e-8 of peak at tau_max.
SqueezingSpectrum oracle_squeezing_spectrum(const CascadedSystem& sys, double theta,
                                            const FrequencyGrid& grid, double tau_max = 40.0,
                                            std::size_t n_tau = 2048);

// Kernel-isolating variant: runs at s and s/2 and extrapolates linearly to
// the weak-drive limit (4 S(s/2) - S(s)), removing the O(s^2) saturation
// term while keeping the overall O(s) scale of the requested s.
SqueezingSpectrum oracle_spectrum_weak_drive(const CascadedSystem& sys, double theta,
                                             const FrequencyGrid& grid, double tau_max = 40.0,
                                             std::size_t n_tau = 2048);

}  // namespace chsq
