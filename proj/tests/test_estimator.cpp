#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chsq/estimator.hpp"
#include "chsq/lambert.hpp"
#include "chsq/physics.hpp"
#include "chsq/rng.hpp"

using namespace chsq;

TEST_CASE("periodogram of unit white noise is flat at 1") {
    GaussianRng rng(11);
    std::vector<std::vector<double>> recs(200, std::vector<double>(2048));
    for (auto& r : recs)
        for (auto& v : r) v = rng.normal();
    const PowerSpectrum ps = averaged_periodogram(recs, 1e6);
    const double mean = band_mean(ps.freq_hz, ps.values, 0.0, 5e5);
    CHECK(mean == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(ps.freq_hz.front() == 0.0);
    CHECK(ps.freq_hz.back() == doctest::Approx(5e5));
}

TEST_CASE("periodogram of a pure sinusoid concentrates at its bin") {
    const std::size_t n = 4096;
    const double a = 0.3;
    const std::size_t k = 97;
    std::vector<double> rec(n);
    for (std::size_t t = 0; t < n; ++t)
        rec[t] = a * std::cos(two_pi * static_cast<double>(k * t) / static_cast<double>(n));
    const PowerSpectrum ps = averaged_periodogram({rec}, 1e6);
    // one-sided bin value a^2 n / 4 (the +-k pair carries a^2 n / 2 in total)
    CHECK(ps.values[k] == doctest::Approx(a * a * static_cast<double>(n) / 4.0).epsilon(1e-10));
    for (std::size_t j = 0; j < ps.values.size(); ++j)
        if (j != k) CHECK(std::abs(ps.values[j]) < 1e-12 * ps.values[k]);
}

TEST_CASE("vacuum normalization and ordering identity") {
    PowerSpectrum probe, vac;
    probe.sample_rate_hz = vac.sample_rate_hz = 1e6;
    probe.n_samples = vac.n_samples = 8;
    probe.n_records = vac.n_records = 100;
    probe.freq_hz = vac.freq_hz = {0, 1, 2, 3, 4};
    vac.values = {1, 1, 1, 1, 1};
    probe.values = {1.0, 0.99, 0.0, 1.02, 1.0};
    const MeasuredSqueezing ms = normalized_squeezing_spectrum(probe, vac);
    for (std::size_t i = 0; i < ms.s_tilde.size(); ++i)
        CHECK(ms.s_normal[i] == 0.25 * (ms.s_tilde[i] - 1.0));  // bin-exact
    CHECK(ms.s_normal[0] == 0.0);          // probe == vacuum: coherent state
    CHECK(ms.s_normal[2] == -0.25);        // zero noise floor
    vac.values[3] = 0.0;
    CHECK_THROWS_AS(normalized_squeezing_spectrum(probe, vac), std::runtime_error);
}

TEST_CASE("theta extraction from a clean beat") {
    const std::size_t n = 4100;
    const double fs = 1e8, f_het = 1e6;
    std::vector<double> beat(n);
    for (const double phase : {0.7, 0.7 + two_pi}) {
        for (std::size_t t = 0; t < n; ++t)
            beat[t] = 5.0 * std::cos(two_pi * f_het * static_cast<double>(t) / fs + phase);
        CHECK(extract_theta(beat, fs, f_het) == doctest::Approx(0.7).epsilon(1e-12));
    }
    // carrier off the FFT grid by ~0.2 bins
    CHECK_THROWS_AS(extract_theta(beat, fs, 1.005e6), std::invalid_argument);
    // quiet record: amplitude below the noise floor
    GaussianRng rng(3);
    for (auto& v : beat) v = rng.normal() + 0.01 * std::cos(two_pi * f_het / fs);
    CHECK_THROWS_AS(extract_theta(beat, fs, f_het), std::runtime_error);
}

TEST_CASE("band average") {
    MeasuredSqueezing ms;
    ms.freq_hz = {0, 1e6, 2e6, 3e6, 4e6};
    ms.s_tilde = {5.0, 1.0, 1.0, 1.0, 9.0};
    ms.s_normal = {0, 0, 0, 0, 0};
    CHECK(band_noise(ms, 0.5e6, 3.5e6) == doctest::Approx(1.0));
    CHECK_THROWS_AS(band_noise(ms, 5e6, 6e6), std::invalid_argument);
    CHECK_THROWS_AS(band_noise(ms, 3e6, 1e6), std::invalid_argument);
}

TEST_CASE("band average agrees with quadrature for a Lorentzian dip") {
    // s_tilde = 1 + 4 S with S a Lorentzian; compare band mean against the
    // trapezoid average of the same closed form
    const std::size_t nb = 2001;
    MeasuredSqueezing ms;
    ms.freq_hz.resize(nb);
    ms.s_tilde.resize(nb);
    ms.s_normal.resize(nb);
    const double gamma_hz = 5.2e6;
    for (std::size_t i = 0; i < nb; ++i) {
        ms.freq_hz[i] = 25e3 * static_cast<double>(i);
        const double w = ms.freq_hz[i] / gamma_hz;
        ms.s_normal[i] = -0.01 / (1.0 + 4.0 * w * w);
        ms.s_tilde[i] = 1.0 + 4.0 * ms.s_normal[i];
    }
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < nb; ++i)
        if (ms.freq_hz[i] >= 1.5e6 && ms.freq_hz[i] <= 23e6) {
            acc += ms.s_tilde[i];
            ++cnt;
        }
    CHECK(band_noise(ms, 1.5e6, 23e6) == doctest::Approx(acc / static_cast<double>(cnt)));
}

TEST_CASE("cosine fit recovers exact parameters") {
    std::vector<NoisePoint> pts;
    for (int i = 0; i < 24; ++i) {
        const double th = two_pi * i / 24.0;
        pts.push_back({th, -0.003 * std::cos(2.0 * th + 0.1 * pi) + 1.0, 1.0});
    }
    const FitResult fit = fit_cosine(pts);
    CHECK(fit.converged);
    CHECK(fit.param("A") == doctest::Approx(0.003).epsilon(1e-10));
    CHECK(fit.param("varphi") == doctest::Approx(0.1 * pi).epsilon(1e-10));
    CHECK(fit.param("c") == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.residual_rms < 1e-10);
    // covariance is symmetric PSD
    for (int i = 0; i < 3; ++i) {
        CHECK(fit.covariance(i, i) >= 0.0);
        for (int j = 0; j < 3; ++j)
            CHECK(fit.covariance(i, j) == doctest::Approx(fit.covariance(j, i)));
    }
}

TEST_CASE("cosine fit on flat data flags the phase as unconstrained") {
    std::vector<NoisePoint> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({two_pi * i / 12.0, 1.0, 1.0});
    const FitResult fit = fit_cosine(pts);
    CHECK(fit.converged);
    CHECK(fit.param("A") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isinf(fit.variance("varphi")));
    CHECK(fit.param("c") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cosine fit input validation") {
    std::vector<NoisePoint> few{{0.0, 1.0, 1}, {0.3, 1.0, 1}, {0.6, 1.0, 1},
                                {0.9, 1.0, 1}, {1.2, 1.0, 1}};
    CHECK_THROWS_AS(fit_cosine(few), std::invalid_argument);
    std::vector<NoisePoint> narrow;
    for (int i = 0; i < 10; ++i) narrow.push_back({0.1 * i, 1.0, 1.0});
    CHECK_THROWS_AS(fit_cosine(narrow), std::invalid_argument);
}

TEST_CASE("noisy weighted cosine fit stays within errors") {
    GaussianRng rng(5);
    std::vector<NoisePoint> pts;
    const double sd = 0.0005;
    for (int i = 0; i < 48; ++i) {
        const double th = two_pi * i / 48.0;
        const double y = -0.005 * std::cos(2.0 * th + 0.2) + 1.0 + sd * rng.normal();
        pts.push_back({th, y, 1.0 / (sd * sd)});
    }
    const FitResult fit = fit_cosine(pts);
    CHECK(fit.converged);
    CHECK(std::abs(fit.param("A") - 0.005) < 4.0 * std::sqrt(fit.variance("A")));
    CHECK(std::abs(fit.param("varphi") - 0.2) < 4.0 * std::sqrt(fit.variance("varphi")));
}

TEST_CASE("per-bin fits reconstruct phase and magnitude of a known phi") {
    // synthetic S(theta, omega) from a complex phi on 40 bins, no noise
    const std::size_t nb = 40;
    std::vector<double> freq(nb);
    std::vector<Complex> phi_true(nb);
    const double gamma = two_pi * 5.2e6;
    for (std::size_t i = 0; i < nb; ++i) {
        freq[i] = 0.5e6 * static_cast<double>(i);
        const double w = two_pi * freq[i] / gamma;
        phi_true[i] = 1e-3 * std::exp(Complex(0.0, 0.4 * std::atan(w))) / (1.0 + w * w);
    }
    const EmitterEnsemble ens{0.007, gamma, 0.0, 42};
    const Drive drive(0.3, 0.0);
    const double eta = 0.22;
    const double pref = drive.s * eta / (16.0 * ens.beta);

    ThetaBinFitAccumulator acc(nb);
    for (int j = 0; j < 16; ++j) {
        const double th = two_pi * j / 16.0;
        std::vector<double> s_meas(nb);
        for (std::size_t i = 0; i < nb; ++i)
            s_meas[i] = -pref * std::real(std::exp(Complex(0.0, 2.0 * th)) * phi_true[i]);
        acc.add(th, s_meas);
    }
    const ComplexReconstruction rec =
        reconstruct_complex_spectrum(acc, freq, drive, ens, eta);
    for (std::size_t i = 1; i < nb; ++i) {
        CHECK(!rec.masked[i]);
        CHECK(rec.phi[i].real() == doctest::Approx(phi_true[i].real()).epsilon(1e-8));
        CHECK(rec.phi[i].imag() == doctest::Approx(phi_true[i].imag()).epsilon(1e-8));
    }
    const PhaseSpectrum ph = reconstruct_phase(acc, freq);
    for (std::size_t i = 1; i < nb; ++i)
        CHECK(std::remainder(ph.phase[i] - std::arg(phi_true[i]), two_pi) ==
              doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("magnitude reconstruction from the four quadrature angles") {
    const std::size_t nb = 30;
    const double gamma = two_pi * 5.2e6;
    const EmitterEnsemble ens{0.007, gamma, 0.0, 51};
    const Drive drive(0.15, 0.0);
    const double eta = 0.22;
    std::vector<double> mag_true(nb), freq(nb);
    std::array<std::optional<MeasuredSqueezing>, 4> by_angle;
    for (int q = 0; q < 4; ++q) {
        MeasuredSqueezing ms;
        ms.freq_hz.resize(nb);
        ms.s_tilde.resize(nb);
        ms.s_normal.resize(nb);
        ms.n_records_probe = ms.n_records_vacuum = 1000000;  // negligible noise
        for (std::size_t i = 0; i < nb; ++i) {
            freq[i] = 0.7e6 * static_cast<double>(i);
            const double w = two_pi * freq[i] / gamma;
            mag_true[i] = 2e-3 / (1.0 + 4.0 * w * w);
            const double s_theta =
                -(drive.s / (16.0 * ens.beta)) * mag_true[i] * std::cos(pi * q);
            ms.freq_hz[i] = freq[i];
            ms.s_normal[i] = eta * s_theta;
            ms.s_tilde[i] = 1.0 + 4.0 * ms.s_normal[i];
        }
        by_angle[static_cast<std::size_t>(q)] = std::move(ms);
    }
    const MagnitudeSpectrum mag = reconstruct_magnitude(by_angle, drive, ens, eta);
    CHECK(mag.n_masked == 0);
    for (std::size_t i = 0; i < nb; ++i)
        CHECK(mag.magnitude[i] == doctest::Approx(mag_true[i]).epsilon(1e-10));

    // eta = 1 vs eta = 0.22 corrected recovery are identical by linearity
    for (int q = 0; q < 4; ++q)
        for (std::size_t i = 0; i < nb; ++i) {
            auto& ms = *by_angle[static_cast<std::size_t>(q)];
            ms.s_normal[i] /= eta;
            ms.s_tilde[i] = 1.0 + 4.0 * ms.s_normal[i];
        }
    const MagnitudeSpectrum mag1 = reconstruct_magnitude(by_angle, drive, ens, 1.0);
    for (std::size_t i = 0; i < nb; ++i)
        CHECK(mag1.magnitude[i] == doctest::Approx(mag.magnitude[i]).epsilon(1e-10));

    // S == 0 gives |phi| == 0
    for (int q = 0; q < 4; ++q)
        for (std::size_t i = 0; i < nb; ++i) {
            auto& ms = *by_angle[static_cast<std::size_t>(q)];
            ms.s_normal[i] = 0.0;
            ms.s_tilde[i] = 1.0;
        }
    const MagnitudeSpectrum mag0 = reconstruct_magnitude(by_angle, drive, ens, eta);
    for (std::size_t i = 0; i < nb; ++i) CHECK(mag0.magnitude[i] == 0.0);

    // missing bins are reported by name
    by_angle[1].reset();
    by_angle[3].reset();
    CHECK_THROWS_WITH_AS(reconstruct_magnitude(by_angle, drive, ens, eta),
                         "reconstruct_magnitude: missing theta bins: pi/2, 3pi/2",
                         std::invalid_argument);
}

TEST_CASE("beta/N fit recovers exact model data") {
    const double gamma = two_pi * 5.2e6;
    const double e_ph = 6.62607015e-34 * 299792458.0 / 852.347e-9;
    const double p_sat = e_ph * gamma / (8.0 * 0.007);
    std::vector<TransmissionPoint> pts;
    for (int i = 0; i < 20; ++i) {
        const double s = 0.03 * std::pow(15.0 / 0.03, i / 19.0);
        pts.push_back({s * p_sat, lambert_beer_transmission(s, 0.007, 169), 0.0});
    }
    const FitResult fit = fit_beta_n(pts, gamma, e_ph);
    CHECK(fit.converged);
    CHECK(fit.param("beta") == doctest::Approx(0.007).epsilon(1e-8));
    CHECK(fit.param("n_atoms") == doctest::Approx(169.0).epsilon(1e-8));
}

TEST_CASE("beta/N fit under 1% multiplicative noise") {
    const double gamma = two_pi * 5.2e6;
    const double e_ph = 6.62607015e-34 * 299792458.0 / 852.347e-9;
    const double p_sat = e_ph * gamma / (8.0 * 0.007);
    GaussianRng rng(31);
    int ok = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        std::vector<TransmissionPoint> pts;
        for (int i = 0; i < 20; ++i) {
            const double s = 0.03 * std::pow(15.0 / 0.03, i / 19.0);
            const double tr = lambert_beer_transmission(s, 0.007, 169);
            const double noisy = tr * (1.0 + 0.01 * rng.normal());
            pts.push_back({s * p_sat, std::max(noisy, 1e-6), 0.01 * tr});
        }
        const FitResult fit = fit_beta_n(pts, gamma, e_ph);
        if (fit.converged && std::abs(fit.param("beta") - 0.007) < 0.02 * 0.007) ++ok;
    }
    CHECK(ok >= trials * 9 / 10);
}

TEST_CASE("beta/N fit rejects degenerate input") {
    std::vector<TransmissionPoint> flat;
    for (int i = 0; i < 8; ++i)
        flat.push_back({1e-12 * std::pow(10.0, i), 0.5, 0.0});
    const double gamma = two_pi * 5.2e6;
    const double e_ph = 2.33e-19;
    const FitResult fit = fit_beta_n(flat, gamma, e_ph);
    CHECK(!fit.converged);  // flat data: non-identifiable

    std::vector<TransmissionPoint> narrow;
    for (int i = 0; i < 8; ++i) narrow.push_back({1e-12 * (1.0 + 0.1 * i), 0.5, 0.0});
    CHECK_THROWS_AS(fit_beta_n(narrow, gamma, e_ph), std::invalid_argument);
}

TEST_CASE("optional Hann window keeps the noise floor calibrated") {
    GaussianRng rng(17);
    std::vector<std::vector<double>> recs(300, std::vector<double>(2048));
    for (auto& r : recs)
        for (auto& v : r) v = rng.normal();
    const PowerSpectrum ps = averaged_periodogram(recs, 1e6, true);
    CHECK(band_mean(ps.freq_hz, ps.values, 0.0, 5e5) == doctest::Approx(1.0).epsilon(5e-3));
}
