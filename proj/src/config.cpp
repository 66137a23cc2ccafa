#include "chsq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chsq {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::runtime_error("config: unknown key '" + it.key() + "' in " + ctx);
}

double get_positive(const json& j, const char* key, double fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    if (!(v > 0.0)) throw std::runtime_error("config: " + ctx + "." + key + " must be positive");
    return v;
}

double get_nonneg(const json& j, const char* key, double fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    if (v < 0.0) throw std::runtime_error("config: " + ctx + "." + key + " must be >= 0");
    return v;
}

}  // namespace

double RunConfig::photon_energy_j() const {
    constexpr double h_planck = 6.62607015e-34;  // J s
    constexpr double c_light = 299792458.0;      // m/s
    return h_planck * c_light / (wavelength_nm * 1e-9);
}

EmitterEnsemble RunConfig::ensemble() const {
    EmitterEnsemble e;
    e.beta = beta;
    e.gamma_tot = gamma_tot_rad_s();
    e.delta = delta_over_gamma * e.gamma_tot;
    e.n_atoms = n_atoms;
    e.validate();
    return e;
}

Drive RunConfig::drive() const { return Drive(s, theta); }

SynthConfig RunConfig::synth_config() const {
    SynthConfig c;
    c.ensemble = ensemble();
    c.drive = drive();
    c.eta = eta;
    c.electronic_noise = electronic_noise;
    c.f_het_hz = f_het_mhz * 1e6;
    c.n_repetitions = n_repetitions;
    c.duration_s = duration_us * 1e-6;
    c.sample_rate_hz = sample_rate_mhz * 1e6;
    c.beat_amplitude = beat_amplitude;
    c.validate();
    return c;
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: parse error: ") + e.what());
    }
    check_keys(j, {"ensemble", "drive", "detection", "synth", "grid", "band", "oracle", "fit",
                   "seed", "out_dir"},
               "top level");

    RunConfig c;
    if (j.contains("ensemble")) {
        const json& e = j.at("ensemble");
        check_keys(e, {"beta", "gamma_tot_mhz", "delta_over_gamma", "n_atoms"}, "ensemble");
        if (e.contains("beta")) c.beta = e.at("beta").get<double>();
        if (!(c.beta >= 0.0 && c.beta <= 1.0))
            throw std::runtime_error("config: ensemble.beta must be in [0,1]");
        c.gamma_tot_mhz = get_positive(e, "gamma_tot_mhz", c.gamma_tot_mhz, "ensemble");
        if (e.contains("delta_over_gamma"))
            c.delta_over_gamma = e.at("delta_over_gamma").get<double>();
        if (e.contains("n_atoms")) c.n_atoms = e.at("n_atoms").get<int>();
        if (c.n_atoms < 0) throw std::runtime_error("config: ensemble.n_atoms must be >= 0");
    }
    if (j.contains("drive")) {
        const json& d = j.at("drive");
        check_keys(d, {"s", "theta"}, "drive");
        c.s = get_nonneg(d, "s", c.s, "drive");
        if (d.contains("theta")) c.theta = d.at("theta").get<double>();
    }
    if (j.contains("detection")) {
        const json& d = j.at("detection");
        check_keys(d, {"eta", "electronic_noise"}, "detection");
        if (d.contains("eta")) c.eta = d.at("eta").get<double>();
        if (!(c.eta >= 0.0 && c.eta <= 1.0))
            throw std::runtime_error("config: detection.eta must be in [0,1]");
        c.electronic_noise = get_nonneg(d, "electronic_noise", c.electronic_noise, "detection");
    }
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        check_keys(s,
                   {"f_het_mhz", "n_repetitions", "duration_us", "sample_rate_mhz", "theta_points",
                    "beat_amplitude"},
                   "synth");
        c.f_het_mhz = get_positive(s, "f_het_mhz", c.f_het_mhz, "synth");
        if (s.contains("n_repetitions")) c.n_repetitions = s.at("n_repetitions").get<int>();
        if (c.n_repetitions < 1) throw std::runtime_error("config: synth.n_repetitions must be >= 1");
        c.duration_us = get_positive(s, "duration_us", c.duration_us, "synth");
        c.sample_rate_mhz = get_positive(s, "sample_rate_mhz", c.sample_rate_mhz, "synth");
        if (s.contains("theta_points")) c.theta_points = s.at("theta_points").get<int>();
        if (c.theta_points < 1) throw std::runtime_error("config: synth.theta_points must be >= 1");
        c.beat_amplitude = get_positive(s, "beat_amplitude", c.beat_amplitude, "synth");
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, {"points", "max_over_gamma"}, "grid");
        if (g.contains("points")) {
            const long long p = g.at("points").get<long long>();
            if (p < 2) throw std::runtime_error("config: grid.points must be >= 2");
            c.grid_points = static_cast<std::size_t>(p);
        }
        c.grid_max_gamma = get_positive(g, "max_over_gamma", c.grid_max_gamma, "grid");
    }
    if (j.contains("band")) {
        const json& b = j.at("band");
        check_keys(b, {"f_min_mhz", "f_max_mhz"}, "band");
        c.f_min_mhz = get_positive(b, "f_min_mhz", c.f_min_mhz, "band");
        c.f_max_mhz = get_positive(b, "f_max_mhz", c.f_max_mhz, "band");
        if (!(c.f_min_mhz < c.f_max_mhz))
            throw std::runtime_error("config: band.f_min_mhz must be < band.f_max_mhz");
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        check_keys(o,
                   {"n_max", "s", "detunings_over_gamma", "thetas", "tau_max", "tau_points",
                    "tolerance_of_peak"},
                   "oracle");
        if (o.contains("n_max")) c.oracle_n_max = o.at("n_max").get<int>();
        if (c.oracle_n_max < 1 || c.oracle_n_max > 8)
            throw std::runtime_error("config: oracle.n_max must be in [1,8]");
        c.oracle_s = get_positive(o, "s", c.oracle_s, "oracle");
        if (o.contains("detunings_over_gamma"))
            c.oracle_detunings = o.at("detunings_over_gamma").get<std::vector<double>>();
        if (o.contains("thetas")) c.oracle_thetas = o.at("thetas").get<std::vector<double>>();
        c.oracle_tau_max = get_positive(o, "tau_max", c.oracle_tau_max, "oracle");
        if (o.contains("tau_points")) c.oracle_tau_points = o.at("tau_points").get<int>();
        if (c.oracle_tau_points < 8)
            throw std::runtime_error("config: oracle.tau_points must be >= 8");
        c.oracle_tolerance_of_peak =
            get_positive(o, "tolerance_of_peak", c.oracle_tolerance_of_peak, "oracle");
    }
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        check_keys(f, {"wavelength_nm"}, "fit");
        c.wavelength_nm = get_positive(f, "wavelength_nm", c.wavelength_nm, "fit");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace chsq
