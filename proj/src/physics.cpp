#include "chsq/physics.hpp"

#include <algorithm>
#include <cmath>

namespace chsq {

namespace {

// t at a detuning delta from atomic resonance, Gamma_tot = 1:
// t = 1 - beta/(1/2 - i delta)
Complex t_at(double beta, double delta) { return 1.0 - beta / Complex(0.5, -delta); }

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

Complex transmission_coefficient(const EmitterEnsemble& ens, double omega_offset) {
    ens.validate();
    if (!std::isfinite(omega_offset))
        throw std::invalid_argument("transmission_coefficient: omega_offset not finite");
    return t_at(ens.beta, (ens.delta + omega_offset) / ens.gamma_tot);
}

double mean_quadrature(const EmitterEnsemble& ens, const Drive& drive) {
    ens.validate();
    if (ens.beta == 0.0)
        throw std::invalid_argument("mean_quadrature: undefined normalization for beta = 0");
    const Complex t = t_at(ens.beta, ens.delta_over_gamma());
    const double delta_n = static_cast<double>(ens.n_atoms) * std::arg(t);
    const double amp = std::pow(std::abs(t), ens.n_atoms) * std::sqrt(drive.s) *
                       std::sqrt(ens.gamma_tot / (8.0 * ens.beta));
    return amp * std::cos(drive.theta + delta_n);
}

double entangled_wavefunction_single(double tau, double beta, double gamma_tot) {
    return 4.0 * beta * beta * std::exp(-std::abs(tau) * gamma_tot / 2.0);
}

ComplexSpectrum compose_entangled_spectrum(const EmitterEnsemble& ens, const FrequencyGrid& grid,
                                           Warnings* warnings) {
    ens.validate();
    grid.validate();
    const std::size_t n = grid.size();
    const double beta = ens.beta;
    const double delta = ens.delta_over_gamma();

    if (warnings) {
        const double omega_max = std::abs(grid.omega.back());
        if (omega_max < 10.0)
            warnings->push_back("compose: grid narrower than 10*Gamma, tails may be truncated");
        if (grid.d_omega > 1.0 / 50.0)
            warnings->push_back("compose: grid coarser than Gamma/50, quadrature may be inaccurate");
    }

    ComplexSpectrum phi;
    phi.grid = grid;
    phi.values.assign(n, Complex(0.0, 0.0));
    if (ens.n_atoms == 0 || beta == 0.0) return phi;

    const Complex p(0.5, -delta);
    const Complex p2 = p * p;
    const Complex t0 = t_at(beta, delta);
    const Complex t0_sq = t0 * t0;
    const double b2 = beta * beta;

    std::vector<Complex> tt(n), lam(n), jker(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = grid.omega[i];
        tt[i] = t_at(beta, delta + w) * t_at(beta, delta - w);
        const Complex den = p2 + w * w;
        lam[i] = 2.0 * p / den;
        jker[i] = grid.weight(i) * b2 / den;  // quadrature weight folded in
    }

    Complex c(1.0, 0.0);
    const Complex source = b2 / p2;
    for (int k = 0; k < ens.n_atoms; ++k) {
        Complex J(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) J += jker[i] * phi.values[i];
        const Complex bound = c * source - J / two_pi;
        for (std::size_t i = 0; i < n; ++i)
            phi.values[i] = tt[i] * phi.values[i] + bound * lam[i];
        c *= t0_sq;
    }

    if (warnings) {
        const double peak = max_abs(phi.values);
        const double edge = std::max(std::abs(phi.values.front()), std::abs(phi.values.back()));
        if (peak > 0.0 && edge > 1e-3 * peak) {
            // 1/w^2 tail bound on the missing integral weight
            const double tail = edge * std::abs(grid.omega.back()) / pi;
            warnings->push_back("compose: spectrum not decayed at grid edge, estimated truncated"
                                " weight " + std::to_string(tail));
        }
    }
    return phi;
}

SqueezingSpectrum squeezing_spectrum(const ComplexSpectrum& phi, const Drive& drive,
                                     const EmitterEnsemble& ens, Warnings* warnings) {
    phi.validate();
    ens.validate();
    if (ens.beta == 0.0 && max_abs(phi.values) > 0.0)
        throw std::invalid_argument("squeezing_spectrum: beta = 0 with nonzero phi");
    if (warnings && drive.s > 1.0)
        warnings->push_back("squeezing_spectrum: s > 1, O(s^2) truncation unreliable");

    SqueezingSpectrum out;
    out.grid = phi.grid;
    out.theta = drive.theta;
    out.ordering = Ordering::normal;
    out.values.resize(phi.size());
    if (ens.beta == 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    // e^{2 i theta} has period pi in theta; reduce first so the periodicity
    // survives floating-point evaluation
    const Complex rot = std::exp(Complex(0.0, 2.0 * std::remainder(drive.theta, pi)));
    const double pref = -drive.s / (16.0 * ens.beta);
    for (std::size_t i = 0; i < phi.size(); ++i)
        out.values[i] = pref * std::real(rot * phi.values[i]);
    return out;
}

SqueezingSpectrum asymptotic_spectrum(const EmitterEnsemble& ens, const Drive& drive,
                                      const FrequencyGrid& grid, AsymptoticRegime regime) {
    ens.validate();
    grid.validate();
    if (std::abs(ens.delta_over_gamma()) > 1e-9)
        throw std::invalid_argument("asymptotic_spectrum: closed forms require resonant drive");

    SqueezingSpectrum out;
    out.grid = grid;
    out.theta = drive.theta;
    out.ordering = Ordering::normal;
    out.values.resize(grid.size());
    const double c2t = std::cos(2.0 * drive.theta);
    const double n = static_cast<double>(ens.n_atoms);
    if (regime == AsymptoticRegime::small_od) {
        const double amp = -n * ens.beta * c2t * drive.s;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double w = grid.omega[i];
            out.values[i] = amp / (1.0 + 4.0 * w * w);
        }
    } else {
        const double xi2 = ens.beta * n * (1.0 - ens.beta);
        const double amp = -c2t * drive.s / 16.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double w = grid.omega[i];
            out.values[i] = (w == 0.0) ? 0.0 : amp * std::exp(-xi2 / (w * w)) / (w * w);
        }
    }
    return out;
}

Complex integrated_wavefunction_at_zero(const ComplexSpectrum& phi, Warnings* warnings) {
    phi.validate();
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) acc += phi.grid.weight(i) * phi.values[i];
    if (warnings) {
        const double peak = max_abs(phi.values);
        const double edge = std::max(std::abs(phi.values.front()), std::abs(phi.values.back()));
        if (peak > 0.0 && edge > 1e-3 * peak)
            warnings->push_back("integrated_wavefunction_at_zero: non-decaying tails, result truncated");
    }
    return acc / two_pi;
}

double squeezing_angle_chi(const ComplexSpectrum& phi, const EmitterEnsemble& ens) {
    ens.validate();
    const Complex phi0 = integrated_wavefunction_at_zero(phi);
    if (std::abs(phi0) < 1e-300)
        throw std::domain_error("squeezing_angle_chi: integrated wavefunction vanishes");
    const Complex t = t_at(ens.beta, ens.delta_over_gamma());
    double chi = std::arg(phi0) - static_cast<double>(ens.n_atoms) * std::arg(t);
    chi = std::remainder(chi, two_pi);
    if (chi <= -pi) chi += two_pi;
    return chi;
}

TimeDomainWavefunction to_time_domain(const ComplexSpectrum& phi) {
    phi.validate();
    const std::size_t n = phi.size();
    const double d_tau = two_pi / (static_cast<double>(n) * phi.grid.d_omega);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n / 2);

    TimeDomainWavefunction out;
    out.tau.resize(n);
    out.values.assign(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        out.tau[j] = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half) * d_tau;

    const double w0 = phi.grid.omega.front();
    for (std::size_t j = 0; j < n; ++j) {
        const double tau = out.tau[j];
        // e^{i omega_k tau} built by recurrence along the uniform grid
        const Complex step = std::polar(1.0, phi.grid.d_omega * tau);
        Complex ph = std::polar(1.0, w0 * tau);
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            acc += phi.grid.weight(k) * phi.values[k] * ph;
            ph *= step;
        }
        out.values[j] = acc / two_pi;
    }
    return out;
}

SqueezingSpectrum apply_detection_efficiency(const SqueezingSpectrum& spec, double eta) {
    spec.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("apply_detection_efficiency: eta must be in [0,1]");
    if (spec.ordering != Ordering::normal)
        throw std::invalid_argument("apply_detection_efficiency: input must be normally ordered");
    SqueezingSpectrum out = spec;
    for (double& v : out.values) v *= eta;
    return out;
}

}  // namespace chsq
