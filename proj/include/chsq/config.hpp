#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chsq/synth.hpp"
#include "chsq/types.hpp"

// Run configuration: a strict JSON document (unknown keys rejected).
// Frequencies are given in MHz in configs -- gamma_tot_mhz is Gamma_tot/2pi --
// and converted once at this boundary to internal units.

namespace chsq {

struct RunConfig {
    // ensemble
    double beta = 0.007;
    double gamma_tot_mhz = 5.2;  // Gamma_tot / 2pi
    double delta_over_gamma = 0.0;
    int n_atoms = 169;
    // drive
    double s = 0.51;
    double theta = 0.0;
    // detection
    double eta = 0.22;
    double electronic_noise = 0.0;
    // synthesizer
    double f_het_mhz = 1.0;
    int n_repetitions = 1000;
    double duration_us = 41.0;
    double sample_rate_mhz = 100.0;
    int theta_points = 24;
    double beat_amplitude = 200.0;
    // analysis grid
    std::size_t grid_points = 4096;
    double grid_max_gamma = 20.0;
    // band average
    double f_min_mhz = 1.5;
    double f_max_mhz = 23.0;
    // oracle comparison
    int oracle_n_max = 3;
    double oracle_s = 0.01;
    std::vector<double> oracle_detunings{0.0, 1.0, -1.0};
    std::vector<double> oracle_thetas{0.0};
    double oracle_tau_max = 40.0;
    int oracle_tau_points = 2048;
    double oracle_tolerance_of_peak = 0.01;
    // transmission fit
    double wavelength_nm = 852.347;  // Cs D2
    // misc
    std::uint64_t seed = 20260809;
    std::string out_dir = "out";

    double gamma_tot_rad_s() const { return two_pi * gamma_tot_mhz * 1e6; }
    double photon_energy_j() const;
    EmitterEnsemble ensemble() const;
    Drive drive() const;
    SynthConfig synth_config() const;
    FrequencyGrid grid() const { return FrequencyGrid::uniform(grid_max_gamma, grid_points); }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace chsq
