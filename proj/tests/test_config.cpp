#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chsq/config.hpp"

using namespace chsq;

TEST_CASE("defaults reproduce the measured operating point") {
    const RunConfig c = parse_config("{}");
    CHECK(c.beta == 0.007);
    CHECK(c.gamma_tot_rad_s() == doctest::Approx(two_pi * 5.2e6));
    const EmitterEnsemble e = c.ensemble();
    CHECK(e.n_atoms == 169);
    // saturation power from the D2 photon energy: ~136 pW
    const double p_sat = c.photon_energy_j() * c.gamma_tot_rad_s() / (8.0 * c.beta);
    CHECK(p_sat == doctest::Approx(136e-12).epsilon(0.01));
}

TEST_CASE("sections parse and convert units once at the boundary") {
    const RunConfig c = parse_config(R"({
        "ensemble": {"beta": 0.01, "gamma_tot_mhz": 6.0, "delta_over_gamma": -1.0, "n_atoms": 7},
        "drive": {"s": 0.2, "theta": 0.5},
        "detection": {"eta": 0.5, "electronic_noise": 0.1},
        "synth": {"f_het_mhz": 2.0, "n_repetitions": 3, "duration_us": 10.0,
                   "sample_rate_mhz": 50.0, "theta_points": 8, "beat_amplitude": 70.0},
        "grid": {"points": 1024, "max_over_gamma": 15.0},
        "band": {"f_min_mhz": 1.0, "f_max_mhz": 20.0},
        "seed": 99,
        "out_dir": "results"
    })");
    const EmitterEnsemble e = c.ensemble();
    CHECK(e.delta == doctest::Approx(-two_pi * 6.0e6));
    const SynthConfig sc = c.synth_config();
    CHECK(sc.f_het_hz == doctest::Approx(2e6));
    CHECK(sc.samples_per_record() == 500);
    CHECK(c.grid().size() == 1024);
    CHECK(c.seed == 99);
    CHECK(c.out_dir == "results");
}

TEST_CASE("unknown keys are rejected with their location") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"enssemble": {}})"),
                         "config: unknown key 'enssemble' in top level", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ensemble": {"betta": 0.007}})"),
                         "config: unknown key 'betta' in ensemble", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"synth": {"durationus": 1}})"),
                         "config: unknown key 'durationus' in synth", std::runtime_error);
}

TEST_CASE("physical values must be positive where required") {
    CHECK_THROWS_AS(parse_config(R"({"ensemble": {"gamma_tot_mhz": -5.2}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"ensemble": {"beta": 1.5}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"ensemble": {"n_atoms": -2}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"drive": {"s": -0.1}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"band": {"f_min_mhz": 5, "f_max_mhz": 2}})"),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"synth": {"n_repetitions": 0}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"oracle": {"n_max": 12}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config(R"({"detection": {"eta": 2.0}})"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("not json"), std::runtime_error);
}
