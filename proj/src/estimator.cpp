#include "chsq/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "chsq/fft.hpp"
#include "chsq/lambert.hpp"

namespace chsq {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

PeriodogramAccumulator::PeriodogramAccumulator(double sample_rate_hz, std::size_t n_samples,
                                               bool hann_window)
    : sample_rate_hz_(sample_rate_hz), n_samples_(n_samples), hann_(hann_window) {
    if (n_samples_ < 2) throw std::invalid_argument("PeriodogramAccumulator: n_samples too small");
    sum_.assign(n_samples_ / 2 + 1, 0.0);
    if (hann_) {
        window_.resize(n_samples_);
        double w2 = 0.0;
        for (std::size_t t = 0; t < n_samples_; ++t) {
            window_[t] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(t) /
                                              static_cast<double>(n_samples_));
            w2 += window_[t] * window_[t];
        }
        window_norm_ = w2 / static_cast<double>(n_samples_);
    }
}

void PeriodogramAccumulator::add(const std::vector<double>& record) {
    if (record.size() != n_samples_)
        throw std::invalid_argument("PeriodogramAccumulator: record length mismatch");
    std::vector<std::complex<double>> half;
    if (hann_) {
        std::vector<double> tmp(record);
        for (std::size_t t = 0; t < n_samples_; ++t) tmp[t] *= window_[t];
        half = fft::rfft(tmp);
    } else {
        half = fft::rfft(record);
    }
    const double scale = 1.0 / (static_cast<double>(n_samples_) * window_norm_);
    for (std::size_t k = 0; k < sum_.size(); ++k) sum_[k] += std::norm(half[k]) * scale;
    ++count_;
}

PowerSpectrum PeriodogramAccumulator::result() const {
    if (count_ == 0) throw std::runtime_error("PeriodogramAccumulator: no records added");
    PowerSpectrum ps;
    ps.sample_rate_hz = sample_rate_hz_;
    ps.n_samples = n_samples_;
    ps.n_records = count_;
    ps.freq_hz.resize(sum_.size());
    ps.values.resize(sum_.size());
    const double df = sample_rate_hz_ / static_cast<double>(n_samples_);
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        ps.freq_hz[k] = df * static_cast<double>(k);
        ps.values[k] = sum_[k] / static_cast<double>(count_);
    }
    return ps;
}

PowerSpectrum averaged_periodogram(const std::vector<std::vector<double>>& records,
                                   double sample_rate_hz, bool hann_window) {
    if (records.empty()) throw std::invalid_argument("averaged_periodogram: no records");
    PeriodogramAccumulator acc(sample_rate_hz, records.front().size(), hann_window);
    for (const auto& r : records) acc.add(r);
    return acc.result();
}

double MeasuredSqueezing::se_tilde(std::size_t i) const {
    // periodogram bins are chi^2_2-distributed: relative SD 1 per record;
    // probe and vacuum averages contribute independently
    const double rel = std::sqrt(1.0 / static_cast<double>(std::max<std::size_t>(n_records_probe, 1)) +
                                 1.0 / static_cast<double>(std::max<std::size_t>(n_records_vacuum, 1)));
    return s_tilde.at(i) * rel;
}

MeasuredSqueezing normalized_squeezing_spectrum(const PowerSpectrum& probe,
                                                const PowerSpectrum& vacuum) {
    if (probe.values.size() != vacuum.values.size() ||
        probe.sample_rate_hz != vacuum.sample_rate_hz)
        throw std::invalid_argument("normalized_squeezing_spectrum: grids differ");
    MeasuredSqueezing out;
    out.freq_hz = probe.freq_hz;
    out.n_records_probe = probe.n_records;
    out.n_records_vacuum = vacuum.n_records;
    out.s_tilde.resize(probe.values.size());
    out.s_normal.resize(probe.values.size());
    for (std::size_t i = 0; i < probe.values.size(); ++i) {
        if (vacuum.values[i] <= 0.0)
            throw std::runtime_error("normalized_squeezing_spectrum: zero vacuum bin (dead band)");
        out.s_tilde[i] = probe.values[i] / vacuum.values[i];
        out.s_normal[i] = 0.25 * (out.s_tilde[i] - 1.0);
    }
    return out;
}

double extract_theta(const std::vector<double>& beat, double sample_rate_hz, double f_het_hz) {
    const std::size_t n = beat.size();
    if (n < 8) throw std::invalid_argument("extract_theta: record too short");
    const double df = sample_rate_hz / static_cast<double>(n);
    const double kf = f_het_hz / df;
    const std::size_t k = static_cast<std::size_t>(std::llround(kf));
    if (k == 0 || k >= n / 2)
        throw std::invalid_argument("extract_theta: f_het outside usable band");
    if (std::abs(kf - static_cast<double>(k)) > 0.1)
        throw std::invalid_argument("extract_theta: f_het not on an FFT bin");

    const auto half = fft::rfft(beat);
    const Complex x = half[k];
    // noise level from total power minus the beat line
    double total = 0.0;
    for (const double v : beat) total += v * v;
    const double line = 2.0 * std::norm(x) / static_cast<double>(n);
    const double noise_var = std::max((total - line) / static_cast<double>(n), 1e-300);
    const double snr_amp = std::abs(x) / std::sqrt(static_cast<double>(n) * noise_var);
    if (snr_amp < 10.0)
        throw std::runtime_error("extract_theta: beat amplitude below noise floor");
    double theta = std::atan2(x.imag(), x.real());
    if (theta < 0.0) theta += two_pi;
    return theta;
}

double band_mean(const std::vector<double>& freq_hz, const std::vector<double>& values,
                 double f_min_hz, double f_max_hz) {
    if (!(f_min_hz < f_max_hz)) throw std::invalid_argument("band_mean: need f_min < f_max");
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < freq_hz.size(); ++i) {
        if (freq_hz[i] >= f_min_hz && freq_hz[i] <= f_max_hz) {
            acc += values[i];
            ++cnt;
        }
    }
    if (cnt == 0) throw std::invalid_argument("band_mean: empty band");
    return acc / static_cast<double>(cnt);
}

double band_noise(const MeasuredSqueezing& spec, double f_min_hz, double f_max_hz) {
    return band_mean(spec.freq_hz, spec.s_tilde, f_min_hz, f_max_hz);
}

double FitResult::param(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i)
        if (param_names[i] == name) return params[static_cast<Eigen::Index>(i)];
    throw std::invalid_argument("FitResult: unknown parameter " + name);
}

double FitResult::variance(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i)
        if (param_names[i] == name) {
            const auto k = static_cast<Eigen::Index>(i);
            return covariance(k, k);
        }
    throw std::invalid_argument("FitResult: unknown parameter " + name);
}

FitResult fit_cosine(const std::vector<NoisePoint>& points) {
    const std::size_t m = points.size();
    if (m < 6) throw std::invalid_argument("fit_cosine: need >= 6 points");
    double tmin = points.front().theta, tmax = tmin;
    for (const auto& p : points) {
        tmin = std::min(tmin, p.theta);
        tmax = std::max(tmax, p.theta);
    }
    if (tmax - tmin < pi - 1e-9)
        throw std::invalid_argument("fit_cosine: theta span must cover at least pi");

    // init from quadrature projections: y ~ a cos2t + b sin2t + c
    double sw = 0, sy = 0, syc = 0, sys = 0;
    for (const auto& p : points) {
        const double w = p.weight > 0.0 ? p.weight : 1.0;
        sw += w;
        sy += w * p.noise;
        syc += w * p.noise * std::cos(2.0 * p.theta);
        sys += w * p.noise * std::sin(2.0 * p.theta);
    }
    const double c0 = sy / sw;
    const double a0 = 2.0 * syc / sw;  // projection coefficients
    const double b0 = 2.0 * sys / sw;
    double A = std::hypot(a0, b0);
    double phi = std::atan2(b0, -a0);
    double c = c0;

    // Gauss-Newton on (A, phi, c)
    bool converged = false;
    int it = 0;
    for (; it < 200; ++it) {
        Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (const auto& p : points) {
            const double w = p.weight > 0.0 ? p.weight : 1.0;
            const double arg = 2.0 * p.theta + phi;
            const double r = p.noise - (-A * std::cos(arg) + c);
            Eigen::Vector3d j(-std::cos(arg), A * std::sin(arg), 1.0);
            h += w * j * j.transpose();
            g += w * j * r;
        }
        // phase direction degenerates as A -> 0
        if (std::abs(h(1, 1)) < 1e-30) h(1, 1) = 1.0;
        const Eigen::Vector3d step = h.ldlt().solve(g);
        A += step(0);
        phi += step(1);
        c += step(2);
        if (step.cwiseAbs().maxCoeff() < 1e-10 * (1.0 + std::abs(A) + std::abs(c))) {
            converged = true;
            ++it;
            break;
        }
    }

    if (A < 0.0) {
        A = -A;
        phi += pi;
    }
    phi = std::remainder(phi, two_pi);

    FitResult res;
    res.param_names = {"A", "varphi", "c"};
    res.params.resize(3);
    res.params << A, phi, c;
    res.converged = converged;
    res.n_iter = it;

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    double ss = 0.0;
    for (const auto& p : points) {
        const double w = p.weight > 0.0 ? p.weight : 1.0;
        const double arg = 2.0 * p.theta + phi;
        const double r = p.noise - (-A * std::cos(arg) + c);
        Eigen::Vector3d j(-std::cos(arg), A * std::sin(arg), 1.0);
        h += w * j * j.transpose();
        ss += r * r;
    }
    res.residual_rms = std::sqrt(ss / static_cast<double>(m));

    const double a_scale = std::max(std::abs(c), 1.0);
    if (A < 1e-12 * a_scale) {
        // flat data: amplitude consistent with zero, phase unconstrained
        res.covariance = Eigen::Matrix3d::Zero();
        Eigen::Matrix2d h2;
        h2 << h(0, 0), h(0, 2), h(2, 0), h(2, 2);
        const Eigen::Matrix2d c2 = h2.inverse();
        res.covariance(0, 0) = c2(0, 0);
        res.covariance(0, 2) = res.covariance(2, 0) = c2(0, 1);
        res.covariance(2, 2) = c2(1, 1);
        res.covariance(1, 1) = kInf;
    } else {
        res.covariance = h.inverse();
    }
    return res;
}

ThetaBinFitAccumulator::ThetaBinFitAccumulator(std::size_t n_bins)
    : syc_(n_bins, 0.0), sys_(n_bins, 0.0), sy_(n_bins, 0.0), syy_(n_bins, 0.0) {
    if (n_bins == 0) throw std::invalid_argument("ThetaBinFitAccumulator: zero bins");
}

void ThetaBinFitAccumulator::add(double theta, const std::vector<double>& s_values, double weight) {
    if (s_values.size() != syc_.size())
        throw std::invalid_argument("ThetaBinFitAccumulator: bin count mismatch");
    const double w = weight > 0.0 ? weight : 1.0;
    const double ct = std::cos(2.0 * theta), st = std::sin(2.0 * theta);
    sw_ += w;
    sc_ += w * ct;
    ss_ += w * st;
    scc_ += w * ct * ct;
    scs_ += w * ct * st;
    sss_ += w * st * st;
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double y = s_values[i];
        syc_[i] += w * y * ct;
        sys_[i] += w * y * st;
        sy_[i] += w * y;
        syy_[i] += w * y * y;
    }
    ++n_;
}

std::vector<ThetaBinFitAccumulator::BinFit> ThetaBinFitAccumulator::finalize() const {
    std::vector<BinFit> out(syc_.size());
    if (n_ < 6) return out;  // all bins not ok
    Eigen::Matrix3d m;
    m << scc_, scs_, sc_, scs_, sss_, ss_, sc_, ss_, sw_;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
    if (!lu.isInvertible()) return out;
    const Eigen::Matrix3d minv = lu.inverse();
    for (std::size_t i = 0; i < syc_.size(); ++i) {
        const Eigen::Vector3d v(syc_[i], sys_[i], sy_[i]);
        const Eigen::Vector3d p = minv * v;
        BinFit& f = out[i];
        f.a = p(0);
        f.b = p(1);
        f.c = p(2);
        f.n = n_;
        const double chi2 = std::max(syy_[i] - p.dot(v), 0.0);
        const double sigma2 = chi2 / static_cast<double>(n_ - 3);
        f.var_a = sigma2 * minv(0, 0);
        f.var_b = sigma2 * minv(1, 1);
        f.cov_ab = sigma2 * minv(0, 1);
        f.ok = std::isfinite(sigma2);
    }
    return out;
}

PhaseSpectrum reconstruct_phase(const ThetaBinFitAccumulator& acc,
                                const std::vector<double>& freq_hz) {
    if (freq_hz.size() != acc.n_bins())
        throw std::invalid_argument("reconstruct_phase: bin count mismatch");
    if (acc.n_samples() < 6)
        throw std::invalid_argument("reconstruct_phase: need >= 6 theta samples per bin");
    const auto fits = acc.finalize();
    PhaseSpectrum out;
    out.freq_hz = freq_hz;
    out.phase.resize(fits.size(), kNaN);
    out.amplitude.resize(fits.size(), kNaN);
    out.masked.resize(fits.size(), true);
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i];
        if (!f.ok) {
            ++out.n_masked;
            continue;
        }
        // y = a cos + b sin + c  <->  -A cos(2theta + phi) + c
        out.amplitude[i] = std::hypot(f.a, f.b);
        out.phase[i] = std::atan2(f.b, -f.a);
        out.masked[i] = false;
    }
    return out;
}

MagnitudeSpectrum reconstruct_magnitude(
    const std::array<std::optional<MeasuredSqueezing>, 4>& spectra_by_angle, const Drive& drive,
    const EmitterEnsemble& ens, double eta) {
    static const char* kAngleNames[4] = {"0", "pi/2", "pi", "3pi/2"};
    std::string missing;
    for (int i = 0; i < 4; ++i) {
        if (!spectra_by_angle[static_cast<std::size_t>(i)]) {
            if (!missing.empty()) missing += ", ";
            missing += kAngleNames[i];
        }
    }
    if (!missing.empty())
        throw std::invalid_argument("reconstruct_magnitude: missing theta bins: " + missing);
    if (!(eta > 0.0)) throw std::invalid_argument("reconstruct_magnitude: eta must be > 0");
    if (!(drive.s > 0.0)) throw std::invalid_argument("reconstruct_magnitude: s must be > 0");

    const auto& s0 = *spectra_by_angle[0];
    const std::size_t nb = s0.s_normal.size();
    for (int i = 1; i < 4; ++i)
        if (spectra_by_angle[static_cast<std::size_t>(i)]->s_normal.size() != nb)
            throw std::invalid_argument("reconstruct_magnitude: bin grids differ");

    MagnitudeSpectrum out;
    out.freq_hz = s0.freq_hz;
    out.magnitude.resize(nb, kNaN);
    out.masked.resize(nb, false);
    const double pref = 16.0 * ens.beta / (drive.s * eta);
    for (std::size_t k = 0; k < nb; ++k) {
        double vals[4], ses[4];
        for (int i = 0; i < 4; ++i) {
            const auto& sp = *spectra_by_angle[static_cast<std::size_t>(i)];
            vals[i] = sp.s_normal[k];
            ses[i] = 0.25 * sp.se_tilde(k);
        }
        // expected pattern: S(0)=S(pi), S(pi/2)=S(3pi/2), opposite-sign pairs
        const double d1 = vals[0] - vals[2], s1 = std::hypot(ses[0], ses[2]);
        const double d2 = vals[1] - vals[3], s2 = std::hypot(ses[1], ses[3]);
        const double d3 = 0.5 * (vals[0] + vals[2]) + 0.5 * (vals[1] + vals[3]);
        const double s3 = 0.5 * std::sqrt(ses[0] * ses[0] + ses[1] * ses[1] + ses[2] * ses[2] +
                                          ses[3] * ses[3]);
        if (std::abs(d1) > 3.0 * s1 || std::abs(d2) > 3.0 * s2 || std::abs(d3) > 3.0 * s3) {
            out.masked[k] = true;
            ++out.n_masked;
            continue;
        }
        const double mean_abs =
            0.25 * (std::abs(vals[0]) + std::abs(vals[1]) + std::abs(vals[2]) + std::abs(vals[3]));
        out.magnitude[k] = pref * mean_abs;
    }
    return out;
}

ComplexReconstruction reconstruct_complex_spectrum(const ThetaBinFitAccumulator& acc,
                                                   const std::vector<double>& freq_hz,
                                                   const Drive& drive, const EmitterEnsemble& ens,
                                                   double eta) {
    if (freq_hz.size() != acc.n_bins())
        throw std::invalid_argument("reconstruct_complex_spectrum: bin count mismatch");
    if (!(eta > 0.0) || !(drive.s > 0.0))
        throw std::invalid_argument("reconstruct_complex_spectrum: need eta > 0 and s > 0");
    const auto fits = acc.finalize();
    const double pref = 16.0 * ens.beta / (drive.s * eta);
    ComplexReconstruction out;
    out.freq_hz = freq_hz;
    out.phi.resize(fits.size());
    out.var_re.resize(fits.size());
    out.var_im.resize(fits.size());
    out.masked.resize(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i];
        out.masked[i] = !f.ok;
        if (!f.ok) continue;
        out.phi[i] = pref * Complex(-f.a, f.b);
        out.var_re[i] = pref * pref * f.var_a;
        out.var_im[i] = pref * pref * f.var_b;
    }
    return out;
}

ReconstructedWavefunction reconstruct_time_domain(const ComplexReconstruction& rec,
                                                  double gamma_tot,
                                                  const std::vector<double>& tau_grid) {
    if (rec.freq_hz.size() < 2)
        throw std::invalid_argument("reconstruct_time_domain: too few bins");
    const double df = rec.freq_hz[1] - rec.freq_hz[0];
    const double dw = two_pi * df / gamma_tot;  // bin spacing in Gamma units

    ReconstructedWavefunction out;
    out.tau = tau_grid;
    out.values.resize(tau_grid.size());
    out.se_re.resize(tau_grid.size());
    out.se_im.resize(tau_grid.size());
    for (std::size_t j = 0; j < tau_grid.size(); ++j) {
        const double tau = tau_grid[j];
        Complex acc(0.0, 0.0);
        double vre = 0.0, vim = 0.0;
        for (std::size_t k = 0; k < rec.freq_hz.size(); ++k) {
            if (rec.masked[k]) continue;
            const double w = two_pi * rec.freq_hz[k] / gamma_tot;
            const double cosw = std::cos(w * tau);
            const double coeff = (k == 0 ? 0.5 : 1.0) * dw / pi;  // one-sided, even integrand
            acc += coeff * cosw * rec.phi[k];
            vre += coeff * coeff * cosw * cosw * rec.var_re[k];
            vim += coeff * coeff * cosw * cosw * rec.var_im[k];
        }
        out.values[j] = acc;
        out.se_re[j] = std::sqrt(vre);
        out.se_im[j] = std::sqrt(vim);
    }
    return out;
}

FitResult fit_beta_n(const std::vector<TransmissionPoint>& points, double gamma_tot_rad_s,
                     double photon_energy_j) {
    if (points.size() < 5) throw std::invalid_argument("fit_beta_n: need >= 5 points");
    double pmin = kInf, pmax = 0.0;
    for (const auto& p : points) {
        if (!(p.power_w > 0.0) || !(p.transmission > 0.0))
            throw std::invalid_argument("fit_beta_n: powers and transmissions must be positive");
        pmin = std::min(pmin, p.power_w);
        pmax = std::max(pmax, p.power_w);
    }
    if (pmax / pmin < 10.0)
        throw std::invalid_argument("fit_beta_n: points must span at least one decade");

    // flat data cannot constrain the model
    double tlo = kInf, thi = 0.0;
    for (const auto& p : points) {
        tlo = std::min(tlo, p.transmission);
        thi = std::max(thi, p.transmission);
    }
    const bool identifiable = (thi - tlo) > 1e-12 * thi;

    const double flux_scale = 8.0 / (photon_energy_j * gamma_tot_rad_s);  // s = beta * P * this
    const auto model = [&](double beta, double n, double power) {
        return lambert_beer_transmission(beta * power * flux_scale, beta, n);
    };

    // initialization: beta = 0.01, N from the lowest-power point via e^{-4 beta N}
    const TransmissionPoint* plow = &points.front();
    for (const auto& p : points)
        if (p.power_w < plow->power_w) plow = &p;
    double beta = 0.01;
    double n_at = std::max(-std::log(std::min(plow->transmission, 0.999999)) / (4.0 * beta), 1e-3);

    // Levenberg-Marquardt on log-parameters (keeps beta, N positive)
    double lp0 = std::log(beta), lp1 = std::log(n_at);
    double lambda = 1e-3;
    const auto chi2_of = [&](double l0, double l1) {
        double acc = 0.0;
        for (const auto& p : points) {
            const double w = p.sigma > 0.0 ? 1.0 / (p.sigma * p.sigma) : 1.0;
            const double r = p.transmission - model(std::exp(l0), std::exp(l1), p.power_w);
            acc += w * r * r;
        }
        return acc;
    };
    double chi2 = chi2_of(lp0, lp1);
    bool converged = false;
    int it = 0;
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    for (; it < 200; ++it) {
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        jtj.setZero();
        const double h0 = 1e-6, h1 = 1e-6;
        for (const auto& p : points) {
            const double w = p.sigma > 0.0 ? 1.0 / (p.sigma * p.sigma) : 1.0;
            const double f = model(std::exp(lp0), std::exp(lp1), p.power_w);
            const double d0 = (model(std::exp(lp0 + h0), std::exp(lp1), p.power_w) -
                               model(std::exp(lp0 - h0), std::exp(lp1), p.power_w)) /
                              (2.0 * h0);
            const double d1 = (model(std::exp(lp0), std::exp(lp1 + h1), p.power_w) -
                               model(std::exp(lp0), std::exp(lp1 - h1), p.power_w)) /
                              (2.0 * h1);
            const double r = p.transmission - f;
            const Eigen::Vector2d j(d0, d1);
            jtj += w * j * j.transpose();
            jtr += w * j * r;
        }
        Eigen::Matrix2d damped = jtj;
        damped(0, 0) *= (1.0 + lambda);
        damped(1, 1) *= (1.0 + lambda);
        const Eigen::Vector2d step = damped.ldlt().solve(jtr);
        const double c2 = chi2_of(lp0 + step(0), lp1 + step(1));
        if (c2 <= chi2) {
            lp0 += step(0);
            lp1 += step(1);
            lambda = std::max(lambda * 0.3, 1e-12);
            const bool small = step.cwiseAbs().maxCoeff() < 1e-12;
            chi2 = c2;
            if (small) {
                converged = true;
                ++it;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    beta = std::exp(lp0);
    n_at = std::exp(lp1);

    FitResult res;
    res.param_names = {"beta", "n_atoms"};
    res.params.resize(2);
    res.params << beta, n_at;
    res.converged = converged && identifiable;
    res.n_iter = it;
    res.residual_rms = std::sqrt(chi2 / static_cast<double>(points.size()));

    // covariance in physical parameters: d(beta)/d(lp0) = beta etc.
    Eigen::Matrix2d cov_log = Eigen::Matrix2d::Constant(kInf);
    Eigen::FullPivLU<Eigen::Matrix2d> lu(jtj);
    if (lu.isInvertible()) cov_log = lu.inverse();
    Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
    jac(0, 0) = beta;
    jac(1, 1) = n_at;
    res.covariance = jac * cov_log * jac.transpose();
    return res;
}

}  // namespace chsq
