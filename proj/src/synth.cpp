#include "chsq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chsq/fft.hpp"
#include "chsq/rng.hpp"

namespace chsq {

void SynthConfig::validate() const {
    ensemble.validate();
    if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0))
        throw std::invalid_argument("SynthConfig: need positive sample rate and duration");
    if (!(f_het_hz > 0.0) || f_het_hz >= sample_rate_hz / 2.0)
        throw std::invalid_argument("SynthConfig: f_het must lie below Nyquist");
    if (n_repetitions < 1) throw std::invalid_argument("SynthConfig: n_repetitions must be >= 1");
    if (electronic_noise < 0.0) throw std::invalid_argument("SynthConfig: electronic_noise < 0");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("SynthConfig: eta must be in [0,1]");
    if (samples_per_record() < 16) throw std::invalid_argument("SynthConfig: record too short");
}

namespace {

// linear interpolation of an even spectrum at |w|, flat beyond the last point
double interp_even(const SqueezingSpectrum& spec, double w) {
    const auto& om = spec.grid.omega;
    const double aw = std::abs(w);
    if (aw >= om.back()) return spec.values.back();
    // grid is symmetric; search in the non-negative half
    const double pos = (aw - om.front()) / spec.grid.d_omega;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= om.size()) return spec.values.back();
    const double t = pos - static_cast<double>(i);
    return spec.values[i] * (1.0 - t) + spec.values[i + 1] * t;
}

}  // namespace

std::vector<double> shape_gaussian_process(const SqueezingSpectrum& target, double gamma_tot,
                                           double sample_rate_hz, std::size_t n_samples,
                                           std::uint64_t seed) {
    target.validate();
    if (target.ordering != Ordering::symmetric)
        throw std::invalid_argument("shape_gaussian_process: target must be symmetric-ordered (a PSD)");
    const std::size_t n = n_samples;
    const std::size_t nh = n / 2;
    const double df = sample_rate_hz / static_cast<double>(n);
    const double dn = static_cast<double>(n);

    GaussianRng rng(seed);
    std::vector<std::complex<double>> half(nh + 1);
    for (std::size_t k = 0; k <= nh; ++k) {
        const double w_over_gamma = two_pi * (df * static_cast<double>(k)) / gamma_tot;
        const double psd = interp_even(target, w_over_gamma);
        if (psd < 0.0)
            throw std::invalid_argument("shape_gaussian_process: negative PSD bin (S < -1/4 upstream?)");
        const bool real_bin = (k == 0) || (n % 2 == 0 && k == nh);
        if (real_bin) {
            half[k] = std::complex<double>(std::sqrt(dn * psd) * rng.normal(), 0.0);
        } else {
            const double sd = std::sqrt(0.5 * dn * psd);
            half[k] = std::complex<double>(sd * rng.normal(), sd * rng.normal());
        }
    }
    return fft::irfft(half, n);
}

SynthContext::SynthContext(const SynthConfig& c, const FrequencyGrid* grid) : cfg(c) {
    cfg.validate();
    FrequencyGrid g;
    if (grid) {
        g = *grid;
    } else {
        // cover the Nyquist range with margin
        const double w_nyq = two_pi * (cfg.sample_rate_hz / 2.0) / cfg.ensemble.gamma_tot;
        g = FrequencyGrid::uniform(std::max(20.0, 1.3 * w_nyq), 4096);
    }
    phi = compose_entangled_spectrum(cfg.ensemble, g);
}

SqueezingSpectrum SynthContext::probe_target(double theta) const {
    const SqueezingSpectrum s =
        squeezing_spectrum(phi, Drive(cfg.drive.s, theta), cfg.ensemble);
    SqueezingSpectrum out = s;
    out.ordering = Ordering::symmetric;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = 1.0 + 4.0 * cfg.eta * s.values[i] + cfg.electronic_noise;
    return out;
}

SqueezingSpectrum SynthContext::vacuum_target() const {
    SqueezingSpectrum out;
    out.grid = phi.grid;
    out.theta = 0.0;
    out.ordering = Ordering::symmetric;
    out.values.assign(phi.size(), 1.0 + cfg.electronic_noise);
    return out;
}

std::vector<double> synthesize_record(const SynthContext& ctx, TraceKind kind, double theta,
                                      std::uint64_t record_index, std::uint64_t seed) {
    const SynthConfig& cfg = ctx.cfg;
    const std::size_t n = cfg.samples_per_record();
    const std::uint64_t rseed = seed ^ record_index;
    switch (kind) {
        case TraceKind::probe:
            return shape_gaussian_process(ctx.probe_target(theta), cfg.ensemble.gamma_tot,
                                          cfg.sample_rate_hz, n, rseed);
        case TraceKind::vacuum:
            return shape_gaussian_process(ctx.vacuum_target(), cfg.ensemble.gamma_tot,
                                          cfg.sample_rate_hz, n, rseed);
        case TraceKind::beat: {
            GaussianRng rng(rseed);
            std::vector<double> out(n);
            const double w = two_pi * cfg.f_het_hz / cfg.sample_rate_hz;
            for (std::size_t t = 0; t < n; ++t)
                out[t] = cfg.beat_amplitude * std::cos(w * static_cast<double>(t) + theta) +
                         rng.normal();
            return out;
        }
    }
    throw std::logic_error("synthesize_record: unknown kind");
}

TraceSet synthesize_run(const SynthConfig& cfg, const std::vector<double>& theta_schedule,
                        std::uint64_t seed) {
    if (theta_schedule.empty()) throw std::invalid_argument("synthesize_run: empty schedule");
    SynthContext ctx(cfg);
    TraceSet ts;
    ts.sample_rate_hz = cfg.sample_rate_hz;
    ts.n_samples = cfg.samples_per_record();
    ts.seed = seed;
    ts.records.reserve(3 * theta_schedule.size());
    std::uint64_t idx = 0;
    for (const double theta : theta_schedule) {
        for (const TraceKind kind : {TraceKind::probe, TraceKind::beat, TraceKind::vacuum}) {
            TraceRecord r;
            r.kind = kind;
            r.theta_true = (kind == TraceKind::vacuum) ? std::nan("") : theta;
            r.data = synthesize_record(ctx, kind, theta, idx, seed);
            ts.records.push_back(std::move(r));
            ++idx;
        }
    }
    return ts;
}

std::vector<double> uniform_theta_schedule(int n_repetitions, int theta_points) {
    if (n_repetitions < 1 || theta_points < 1)
        throw std::invalid_argument("uniform_theta_schedule: bad arguments");
    std::vector<double> out(static_cast<std::size_t>(n_repetitions));
    for (int i = 0; i < n_repetitions; ++i)
        out[static_cast<std::size_t>(i)] = two_pi * (i % theta_points) / theta_points;
    return out;
}

}  // namespace chsq
