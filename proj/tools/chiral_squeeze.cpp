// Command-line front end: compute spectra, synthesize homodyne traces, run
// the analysis chain, compare against the cascaded-master-equation oracle,
// and fit (beta, N) from transmission data. All outputs are CSV or JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "chsq/config.hpp"
#include "chsq/csv.hpp"
#include "chsq/estimator.hpp"
#include "chsq/oracle.hpp"
#include "chsq/parallel.hpp"
#include "chsq/physics.hpp"
#include "chsq/synth.hpp"
#include "chsq/traces.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> grid_points;
    std::optional<double> grid_max_gamma;
};

chsq::RunConfig resolve(const CommonOpts& o) {
    chsq::RunConfig cfg =
        o.config_path.empty() ? chsq::RunConfig{} : chsq::load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.grid_points) cfg.grid_points = *o.grid_points;
    if (o.grid_max_gamma) cfg.grid_max_gamma = *o.grid_max_gamma;
    return cfg;
}

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--config", o.config_path, "JSON run configuration");
    app->add_option("--seed", o.seed, "override RNG seed");
    app->add_option("--out", o.out_dir, "output directory");
    app->add_option("--grid-points", o.grid_points, "frequency grid points");
    app->add_option("--grid-max-gamma", o.grid_max_gamma, "grid half-width in units of Gamma");
}

fs::path ensure_out_dir(const chsq::RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

void print_warnings(const chsq::Warnings& w) {
    for (const auto& msg : w) std::cerr << "warning: " << msg << "\n";
}

int cmd_spectrum(const CommonOpts& opts) {
    const chsq::RunConfig cfg = resolve(opts);
    const fs::path dir = ensure_out_dir(cfg);
    const chsq::EmitterEnsemble ens = cfg.ensemble();
    const chsq::Drive drive = cfg.drive();
    const chsq::FrequencyGrid grid = cfg.grid();

    chsq::Warnings warnings;
    const chsq::ComplexSpectrum phi = chsq::compose_entangled_spectrum(ens, grid, &warnings);
    chsq::write_complex_spectrum_csv(phi, (dir / "phi_n.csv").string());

    const chsq::SqueezingSpectrum s =
        chsq::squeezing_spectrum(phi, drive, ens, &warnings);
    chsq::write_squeezing_csv(s, (dir / "s_theta.csv").string());
    chsq::write_squeezing_csv(chsq::apply_detection_efficiency(s, cfg.eta),
                              (dir / "s_theta_detected.csv").string());

    if (std::abs(cfg.delta_over_gamma) < 1e-12) {
        chsq::write_squeezing_csv(
            chsq::asymptotic_spectrum(ens, drive, grid, chsq::AsymptoticRegime::small_od),
            (dir / "s_asymptotic_small_od.csv").string());
        chsq::write_squeezing_csv(
            chsq::asymptotic_spectrum(ens, drive, grid, chsq::AsymptoticRegime::large_od),
            (dir / "s_asymptotic_large_od.csv").string());
    }

    const chsq::TimeDomainWavefunction wf = chsq::to_time_domain(phi);
    std::vector<double> re(wf.values.size()), im(wf.values.size());
    for (std::size_t i = 0; i < wf.values.size(); ++i) {
        re[i] = wf.values[i].real();
        im[i] = wf.values[i].imag();
    }
    chsq::write_table_csv({"tau_gamma", "re", "im"}, {&wf.tau, &re, &im},
                          (dir / "phi_tau.csv").string());

    print_warnings(warnings);
    std::cout << "spectrum: wrote phi_n.csv, s_theta.csv, s_theta_detected.csv, phi_tau.csv"
              << (std::abs(cfg.delta_over_gamma) < 1e-12 ? ", s_asymptotic_*.csv" : "") << " in "
              << dir.string() << "\n";
    return 0;
}

int cmd_synthesize(const CommonOpts& opts, const std::string& out_file) {
    const chsq::RunConfig cfg = resolve(opts);
    const fs::path dir = ensure_out_dir(cfg);
    const chsq::SynthConfig sc = cfg.synth_config();
    const auto schedule = chsq::uniform_theta_schedule(cfg.n_repetitions, cfg.theta_points);
    const chsq::TraceSet ts = chsq::synthesize_run(sc, schedule, cfg.seed);
    const fs::path path = out_file.empty() ? dir / "traces.hmdt" : fs::path(out_file);
    chsq::write_traces(ts, path.string());
    std::cout << "synthesize: wrote " << ts.records.size() << " records ("
              << ts.n_samples << " samples each) to " << path.string() << "\n";
    return 0;
}

int cmd_analyze(const CommonOpts& opts, const std::string& trace_file) {
    const chsq::RunConfig cfg = resolve(opts);
    const fs::path dir = ensure_out_dir(cfg);
    const chsq::EmitterEnsemble ens = cfg.ensemble();
    const chsq::Drive drive = cfg.drive();
    const double gamma = cfg.gamma_tot_rad_s();
    const double f_min = cfg.f_min_mhz * 1e6, f_max = cfg.f_max_mhz * 1e6;

    chsq::TraceFileReader reader(trace_file);
    const std::size_t n = reader.n_samples();
    const double fs_hz = reader.sample_rate_hz();

    // pass 1: vacuum reference
    chsq::PeriodogramAccumulator vac_acc(fs_hz, n);
    for (std::size_t i = 0; i < reader.n_records(); ++i)
        if (reader.kind(i) == chsq::TraceKind::vacuum) vac_acc.add(reader.read_record(i));
    const chsq::PowerSpectrum vac_psd = vac_acc.result();

    // pass 2: per-cycle spectra, extracted theta, noise points, theta bins
    const std::size_t n_bins = n / 2 + 1;
    chsq::ThetaBinFitAccumulator bin_acc(n_bins);
    std::vector<chsq::NoisePoint> noise_points;
    std::array<std::optional<chsq::PeriodogramAccumulator>, 4> quad_acc;
    std::array<std::size_t, 4> quad_counts{0, 0, 0, 0};
    const double bin_halfwidth = 18.0 * chsq::pi / 180.0;

    std::size_t n_band_bins = 0;
    for (std::size_t k = 0; k < n_bins; ++k)
        if (vac_psd.freq_hz[k] >= f_min && vac_psd.freq_hz[k] <= f_max) ++n_band_bins;

    std::optional<double> pending_theta;
    std::vector<double> pending_probe;
    std::size_t n_cycles = 0;
    for (std::size_t i = 0; i < reader.n_records(); ++i) {
        const chsq::TraceKind kind = reader.kind(i);
        if (kind == chsq::TraceKind::probe) {
            pending_probe = reader.read_record(i);
            pending_theta.reset();
        } else if (kind == chsq::TraceKind::beat) {
            pending_theta = chsq::extract_theta(reader.read_record(i), fs_hz, cfg.f_het_mhz * 1e6);
        } else if (!pending_probe.empty() && pending_theta) {
            // vacuum closes the cycle
            const double theta = *pending_theta;
            chsq::PeriodogramAccumulator one(fs_hz, n);
            one.add(pending_probe);
            const chsq::MeasuredSqueezing ms =
                chsq::normalized_squeezing_spectrum(one.result(), vac_psd);
            const double noise = chsq::band_noise(ms, f_min, f_max);
            // inverse variance with a common variance estimate; weighting by
            // the measured noise itself would bias the weighted fit low
            noise_points.push_back({theta, noise, static_cast<double>(n_band_bins)});
            bin_acc.add(theta, ms.s_normal);
            for (int q = 0; q < 4; ++q) {
                const double target = 0.5 * chsq::pi * q;
                double d = std::remainder(theta - target, chsq::two_pi);
                if (std::abs(d) <= bin_halfwidth) {
                    auto& acc = quad_acc[static_cast<std::size_t>(q)];
                    if (!acc) acc.emplace(fs_hz, n);
                    acc->add(pending_probe);
                    ++quad_counts[static_cast<std::size_t>(q)];
                }
            }
            pending_probe.clear();
            pending_theta.reset();
            ++n_cycles;
        }
    }
    if (noise_points.empty()) throw std::runtime_error("analyze: no complete cycles in trace file");

    // noise vs theta and the cosine fit
    const chsq::FitResult fit = chsq::fit_cosine(noise_points);
    {
        std::vector<double> th(noise_points.size()), nz(noise_points.size()),
            wt(noise_points.size());
        for (std::size_t i = 0; i < noise_points.size(); ++i) {
            th[i] = noise_points[i].theta;
            nz[i] = noise_points[i].noise;
            wt[i] = noise_points[i].weight;
        }
        chsq::write_table_csv({"theta", "noise", "weight"}, {&th, &nz, &wt},
                              (dir / "noise_vs_theta.csv").string());
    }

    // |phi| from the four quadrature angles
    std::array<std::optional<chsq::MeasuredSqueezing>, 4> quad_spectra;
    for (int q = 0; q < 4; ++q) {
        auto& acc = quad_acc[static_cast<std::size_t>(q)];
        if (acc && quad_counts[static_cast<std::size_t>(q)] > 0)
            quad_spectra[static_cast<std::size_t>(q)] =
                chsq::normalized_squeezing_spectrum(acc->result(), vac_psd);
    }
    std::optional<chsq::MagnitudeSpectrum> mag;
    std::string mag_error;
    try {
        mag = chsq::reconstruct_magnitude(quad_spectra, drive, ens, cfg.eta);
    } catch (const std::exception& e) {
        mag_error = e.what();
    }
    if (mag) {
        std::vector<double> w_over_g(mag->freq_hz.size());
        for (std::size_t i = 0; i < mag->freq_hz.size(); ++i)
            w_over_g[i] = chsq::two_pi * mag->freq_hz[i] / gamma;
        chsq::write_table_csv({"omega_over_gamma", "phi_magnitude"}, {&w_over_g, &mag->magnitude},
                              (dir / "phi_magnitude.csv").string());
    }

    // per-bin phase and the complex reconstruction
    const chsq::PhaseSpectrum phase = chsq::reconstruct_phase(bin_acc, vac_psd.freq_hz);
    {
        std::vector<double> w_over_g(phase.freq_hz.size());
        for (std::size_t i = 0; i < phase.freq_hz.size(); ++i)
            w_over_g[i] = chsq::two_pi * phase.freq_hz[i] / gamma;
        chsq::write_table_csv({"omega_over_gamma", "phase", "amplitude"},
                              {&w_over_g, &phase.phase, &phase.amplitude},
                              (dir / "phi_phase.csv").string());
    }
    const chsq::ComplexReconstruction rec =
        chsq::reconstruct_complex_spectrum(bin_acc, vac_psd.freq_hz, drive, ens, cfg.eta);
    std::vector<double> tau_grid;
    for (double t = -8.0; t <= 8.0 + 1e-12; t += 0.05) tau_grid.push_back(t);
    const chsq::ReconstructedWavefunction wf =
        chsq::reconstruct_time_domain(rec, gamma, tau_grid);
    {
        std::vector<double> re(wf.values.size()), im(wf.values.size());
        for (std::size_t i = 0; i < wf.values.size(); ++i) {
            re[i] = wf.values[i].real();
            im[i] = wf.values[i].imag();
        }
        chsq::write_table_csv({"tau_gamma", "re", "im", "se_re", "se_im"},
                              {&wf.tau, &re, &im, &wf.se_re, &wf.se_im},
                              (dir / "phi_tau_reconstructed.csv").string());
    }

    json report;
    report["n_cycles"] = n_cycles;
    report["band_mhz"] = {cfg.f_min_mhz, cfg.f_max_mhz};
    report["cosine_fit"] = {{"A", fit.param("A")},
                            {"varphi", fit.param("varphi")},
                            {"c", fit.param("c")},
                            {"varphi_over_pi", fit.param("varphi") / chsq::pi},
                            {"residual_rms", fit.residual_rms},
                            {"converged", fit.converged},
                            {"n_iter", fit.n_iter},
                            {"covariance",
                             {{fit.covariance(0, 0), fit.covariance(0, 1), fit.covariance(0, 2)},
                              {fit.covariance(1, 0), fit.covariance(1, 1), fit.covariance(1, 2)},
                              {fit.covariance(2, 0), fit.covariance(2, 1), fit.covariance(2, 2)}}}};
    report["min_noise"] = fit.param("c") - fit.param("A");
    report["squeezing_percent"] = 100.0 * (1.0 - (fit.param("c") - fit.param("A")));
    report["phase_bins_masked"] = phase.n_masked;
    if (mag)
        report["magnitude_bins_masked"] = mag->n_masked;
    else
        report["magnitude_error"] = mag_error;
    for (int q = 0; q < 4; ++q)
        report["quadrature_bin_records"][static_cast<std::size_t>(q)] =
            quad_counts[static_cast<std::size_t>(q)];

    std::ofstream rf(dir / "analysis_report.json");
    rf << report.dump(2) << "\n";
    std::cout << "analyze: " << n_cycles << " cycles, min noise "
              << (fit.param("c") - fit.param("A")) << " (squeezing "
              << 100.0 * (1.0 - fit.param("c") + fit.param("A")) << "%), varphi/pi = "
              << fit.param("varphi") / chsq::pi << "\n";
    std::cout << "analyze: wrote report and CSVs in " << dir.string() << "\n";
    return 0;
}

int cmd_oracle_compare(const CommonOpts& opts) {
    const chsq::RunConfig cfg = resolve(opts);
    const fs::path dir = ensure_out_dir(cfg);
    const chsq::FrequencyGrid grid = chsq::FrequencyGrid::uniform(5.0, 201);

    struct Case {
        int n;
        double delta, theta;
    };
    std::vector<Case> cases;
    for (int n = 1; n <= cfg.oracle_n_max; ++n)
        for (const double d : cfg.oracle_detunings)
            for (const double th : cfg.oracle_thetas) cases.push_back({n, d, th});

    struct Row {
        Case c;
        double peak, max_dev;
        bool pass;
        std::vector<double> s_oracle, s_composed;
    };
    std::vector<Row> rows(cases.size());
    chsq::parallel_for(cases.size(), [&](std::size_t i) {
        const Case& c = cases[i];
        chsq::EmitterEnsemble ens{cfg.beta, 1.0, c.delta, c.n};
        const chsq::ComplexSpectrum phi = chsq::compose_entangled_spectrum(
            ens, chsq::FrequencyGrid::uniform(cfg.grid_max_gamma, cfg.grid_points));
        const chsq::SqueezingSpectrum sc =
            chsq::squeezing_spectrum(phi, chsq::Drive(cfg.oracle_s, c.theta), ens);
        chsq::CascadedSystem sys{c.n, cfg.beta, c.delta, cfg.oracle_s};
        const chsq::SqueezingSpectrum so = chsq::oracle_spectrum_weak_drive(
            sys, c.theta, grid, cfg.oracle_tau_max,
            static_cast<std::size_t>(cfg.oracle_tau_points));
        Row& row = rows[i];
        row.c = c;
        row.peak = 0.0;
        row.max_dev = 0.0;
        row.s_oracle.resize(grid.size());
        row.s_composed.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            // interpolate composed S onto the comparison grid
            const double w = grid.omega[k];
            const double pos = (w - phi.grid.omega.front()) / phi.grid.d_omega;
            const std::size_t j = static_cast<std::size_t>(pos);
            const double t = pos - static_cast<double>(j);
            const double s_c = sc.values[j] * (1.0 - t) + sc.values[j + 1] * t;
            row.s_oracle[k] = so.values[k];
            row.s_composed[k] = s_c;
            row.peak = std::max(row.peak, std::abs(so.values[k]));
            row.max_dev = std::max(row.max_dev, std::abs(so.values[k] - s_c));
        }
        row.pass = row.max_dev <= cfg.oracle_tolerance_of_peak * std::max(row.peak, 1e-300);
    });

    json report = json::array();
    bool all_pass = true;
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        json bins = json::array();
        for (std::size_t k = 0; k < grid.size(); ++k)
            bins.push_back({{"omega_over_gamma", grid.omega[k]},
                            {"s_oracle", r.s_oracle[k]},
                            {"s_composed", r.s_composed[k]},
                            {"deviation", r.s_oracle[k] - r.s_composed[k]}});
        report.push_back({{"n_atoms", r.c.n},
                          {"delta_over_gamma", r.c.delta},
                          {"theta", r.c.theta},
                          {"peak_abs", r.peak},
                          {"max_deviation", r.max_dev},
                          {"deviation_of_peak", r.peak > 0 ? r.max_dev / r.peak : 0.0},
                          {"pass", r.pass},
                          {"bins", std::move(bins)}});
        std::printf("  N=%d delta=%+.2f theta=%.3f  peak=%.3e  maxdev=%.3e  %s\n", r.c.n,
                    r.c.delta, r.c.theta, r.peak, r.max_dev, r.pass ? "pass" : "FAIL");
    }
    std::ofstream rf(dir / "oracle_compare.json");
    rf << json{{"tolerance_of_peak", cfg.oracle_tolerance_of_peak}, {"cases", report}}.dump(2)
       << "\n";
    std::cout << (all_pass ? "oracle-compare: all cases pass" : "oracle-compare: FAILURES") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_fit_beta(const CommonOpts& opts, const std::string& csv_path) {
    const chsq::RunConfig cfg = resolve(opts);
    const fs::path dir = ensure_out_dir(cfg);
    const auto points = chsq::read_transmission_csv(csv_path);
    const chsq::FitResult fit =
        chsq::fit_beta_n(points, cfg.gamma_tot_rad_s(), cfg.photon_energy_j());
    json report{{"beta", fit.param("beta")},
                {"n_atoms", fit.param("n_atoms")},
                {"beta_sigma", std::sqrt(fit.variance("beta"))},
                {"n_atoms_sigma", std::sqrt(fit.variance("n_atoms"))},
                {"residual_rms", fit.residual_rms},
                {"converged", fit.converged},
                {"n_iter", fit.n_iter}};
    std::ofstream rf(dir / "beta_fit.json");
    rf << report.dump(2) << "\n";
    std::cout << "fit-beta: beta = " << fit.param("beta") << " +/- "
              << std::sqrt(fit.variance("beta")) << ", N = " << fit.param("n_atoms") << " +/- "
              << std::sqrt(fit.variance("n_atoms")) << (fit.converged ? "" : "  (not converged)")
              << "\n";
    return fit.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezing spectrum and two-photon wavefunction toolkit for chirally coupled"
                 " atom chains"};
    app.require_subcommand(1);

    CommonOpts o_spec, o_synth, o_ana, o_oracle, o_beta;
    std::string synth_out, trace_file, beta_csv;

    CLI::App* c_spec = app.add_subcommand("spectrum", "compute phi_N and squeezing spectra");
    add_common(c_spec, o_spec);

    CLI::App* c_synth = app.add_subcommand("synthesize", "generate a homodyne trace container");
    add_common(c_synth, o_synth);
    c_synth->add_option("--traces", synth_out, "output trace file (default <out>/traces.hmdt)");

    CLI::App* c_ana = app.add_subcommand("analyze", "run the measurement chain on a trace file");
    add_common(c_ana, o_ana);
    c_ana->add_option("--traces", trace_file, "input trace container")->required();

    CLI::App* c_oracle =
        app.add_subcommand("oracle-compare", "composed spectra vs cascaded master equation");
    add_common(c_oracle, o_oracle);

    CLI::App* c_beta = app.add_subcommand("fit-beta", "fit (beta, N) to transmission data");
    add_common(c_beta, o_beta);
    c_beta->add_option("--csv", beta_csv, "CSV with power_w (or power_pw), transmission[, sigma]")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_spec->parsed()) return cmd_spectrum(o_spec);
        if (c_synth->parsed()) return cmd_synthesize(o_synth, synth_out);
        if (c_ana->parsed()) return cmd_analyze(o_ana, trace_file);
        if (c_oracle->parsed()) return cmd_oracle_compare(o_oracle);
        if (c_beta->parsed()) return cmd_fit_beta(o_beta, beta_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
