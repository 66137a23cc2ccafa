#pragma once

#include "chsq/types.hpp"

// Closed-form and composed evaluation of transmission, mean quadrature,
// the entangled two-photon spectrum phi_N(omega), squeezing spectra and
// their small/large optical-depth asymptotics.
//
// All spectra live on grids in units of Gamma_tot; phi carries 1/Gamma_tot.

namespace chsq {

// Single-atom transmission t = 1 - 2*beta / (1 - 2i*(Delta+omega_offset)/Gamma),
// evaluated at the effective detuning Delta + omega_offset. omega_offset in
// the same units as ens.gamma_tot.
Complex transmission_coefficient(const EmitterEnsemble& ens, double omega_offset = 0.0);

// Mean output quadrature <X_theta> = |t|^N sqrt(s) sqrt(Gamma/8beta) cos(theta + delta_N)
// with delta_N = N*Arg(t) accumulated continuously (never the principal value
// of the power). Throws for beta = 0 (saturation power diverges).
double mean_quadrature(const EmitterEnsemble& ens, const Drive& drive);

// Resonant single-emitter entangled wavefunction phi_1(tau) = 4 beta^2 e^{-|tau| Gamma/2}.
double entangled_wavefunction_single(double tau, double beta, double gamma_tot = 1.0);

// phi_N(omega) by atom-by-atom composition.
//
// State after k atoms: coherent pair amplitude c_k = t_Delta^{2k} plus the
// correlated spectrum phi_k. One more atom acts affinely,
//
//   phi_{k+1}(w) = t(D+w) t(D-w) phi_k(w)
//                  + Lambda(w) [ c_k G^2/p^2 - (G^2/2pi) Int phi_k(v)/(p^2+v^2) dv ],
//
// with p = 1/2 - i*Delta, G = beta (guided rate, Gamma_tot = 1) and
// Lambda(w) = 2p/(p^2+w^2) the spectrum of the single-atom exponential.
// The three terms are transmission of existing pairs, pair creation from the
// coherent component, and reabsorption of previously created pairs.
//
// A warning (not an error) is appended when the grid looks too narrow or too
// coarse for the requested parameters.
ComplexSpectrum compose_entangled_spectrum(const EmitterEnsemble& ens, const FrequencyGrid& grid,
                                           Warnings* warnings = nullptr);

// S_theta(omega) = -(1/16 beta) * s * Re[e^{2 i theta} phi(omega)]   (Gamma_tot units).
// Appends a warning for s > 1 (leading-order truncation degrades).
SqueezingSpectrum squeezing_spectrum(const ComplexSpectrum& phi, const Drive& drive,
                                     const EmitterEnsemble& ens, Warnings* warnings = nullptr);

enum class AsymptoticRegime { small_od, large_od };

// Resonant closed forms:
//   small_od: S = -N beta cos(2theta) s / (1 + 4 w^2)
//   large_od: S = -(cos(2theta) s / 16) (1/w^2) e^{-xi^2/w^2},  xi^2 = beta N (1-beta),
// with the w = 0 value of the large-OD form defined as its limit, 0.
SqueezingSpectrum asymptotic_spectrum(const EmitterEnsemble& ens, const Drive& drive,
                                      const FrequencyGrid& grid, AsymptoticRegime regime);

// phi(tau=0) = (1/2pi) Int phi(omega) domega, trapezoid rule. Appends a
// truncation warning when the spectrum has not decayed at the grid edges.
Complex integrated_wavefunction_at_zero(const ComplexSpectrum& phi, Warnings* warnings = nullptr);

// Squeezing angle chi = Arg(phi(tau=0)) - N*Arg(t_Delta), reduced to (-pi, pi].
// Throws when the integrated wavefunction vanishes (angle undefined).
double squeezing_angle_chi(const ComplexSpectrum& phi, const EmitterEnsemble& ens);

// Inverse transform phi(tau) = (1/2pi) Int phi(omega) e^{+i omega tau} domega
// on the conjugate delay grid (d_tau = 2pi / (n d_omega), tau = 0 included).
// Uses the same trapezoid weights as integrated_wavefunction_at_zero, so the
// tau = 0 sample reproduces it exactly.
TimeDomainWavefunction to_time_domain(const ComplexSpectrum& phi);

// Linear-loss model of the detection chain: normally ordered fluctuation
// spectra scale by eta.
SqueezingSpectrum apply_detection_efficiency(const SqueezingSpectrum& spec, double eta);

}  // namespace chsq
