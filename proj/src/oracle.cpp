#include "chsq/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace chsq {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void CascadedSystem::validate() const {
    if (n_atoms < 1) throw std::invalid_argument("CascadedSystem: need n_atoms >= 1");
    if (n_atoms > 8)
        throw std::invalid_argument("CascadedSystem: dense representation capped at 8 atoms");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("CascadedSystem: beta in [0,1]");
    if (s < 0.0) throw std::invalid_argument("CascadedSystem: s must be >= 0");
}

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// sigma_minus acting on atom j of n (atom 0 upstream)
MatrixXcd sigma_minus(int j, int n) {
    MatrixXcd sm(2, 2), id(2, 2);
    sm << 0, 1, 0, 0;
    id.setIdentity();
    MatrixXcd out = (j == 0) ? sm : id;
    for (int k = 1; k < n; ++k) out = kron(out, (k == j) ? sm : id);
    return out;
}

MatrixXcd dissipator(const MatrixXcd& c) {
    const Eigen::Index d = c.rows();
    const MatrixXcd id = MatrixXcd::Identity(d, d);
    const MatrixXcd cdc = c.adjoint() * c;
    return kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
}

VectorXcd vec(const MatrixXcd& m) {
    return Eigen::Map<const VectorXcd>(m.data(), m.size());
}

MatrixXcd unvec(const VectorXcd& v, Eigen::Index d) {
    return Eigen::Map<const MatrixXcd>(v.data(), d, d);
}

}  // namespace

MatrixXcd build_liouvillian(const CascadedSystem& sys) {
    sys.validate();
    const int n = sys.n_atoms;
    const int d = sys.hilbert_dim();
    const double gw = sys.beta;
    const double gl = 1.0 - sys.beta;
    const double alpha = (sys.beta > 0.0) ? std::sqrt(sys.s / (8.0 * sys.beta)) : 0.0;

    std::vector<MatrixXcd> sm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) sm[static_cast<std::size_t>(j)] = sigma_minus(j, n);

    MatrixXcd h = MatrixXcd::Zero(d, d);
    const Complex i_unit(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const MatrixXcd& s_j = sm[static_cast<std::size_t>(j)];
        const MatrixXcd sp_j = s_j.adjoint();
        h += -sys.delta * (sp_j * s_j);
        h += -i_unit * std::sqrt(gw) * alpha * (sp_j - s_j);  // alpha real
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const MatrixXcd& s_j = sm[static_cast<std::size_t>(j)];
            const MatrixXcd& s_k = sm[static_cast<std::size_t>(k)];
            h += -0.5 * i_unit * gw * (s_k.adjoint() * s_j - s_j.adjoint() * s_k);
        }

    const MatrixXcd id = MatrixXcd::Identity(d, d);
    MatrixXcd liou = -i_unit * (kron(id, h) - kron(h.transpose(), id));

    MatrixXcd s_coll = MatrixXcd::Zero(d, d);
    for (int j = 0; j < n; ++j) {
        s_coll += sm[static_cast<std::size_t>(j)];
        liou += dissipator(std::sqrt(gl) * sm[static_cast<std::size_t>(j)]);
    }
    liou += dissipator(std::sqrt(gw) * s_coll);
    return liou;
}

double trace_defect(const MatrixXcd& liouvillian) {
    const auto dim = liouvillian.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(dim))));
    const MatrixXcd id = MatrixXcd::Identity(d, d);
    const Eigen::RowVectorXcd tr_row = vec(id).transpose() * liouvillian;
    return tr_row.cwiseAbs().maxCoeff();
}

MatrixXcd steady_state(const MatrixXcd& liouvillian, int hilbert_dim, int* kernel_dim) {
    Eigen::FullPivLU<MatrixXcd> lu(liouvillian);
    lu.setThreshold(1e-9);
    const MatrixXcd ker = lu.kernel();
    if (kernel_dim) *kernel_dim = static_cast<int>(ker.cols());
    if (ker.cols() < 1) throw std::runtime_error("steady_state: empty generator kernel");
    MatrixXcd rho = unvec(ker.col(0), hilbert_dim);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw std::runtime_error("steady_state: traceless kernel vector");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint().eval());  // scrub rounding asymmetry
    return rho;
}

TwoTimeCorrelations output_correlations(const CascadedSystem& sys, double tau_max,
                                        std::size_t n_tau) {
    sys.validate();
    if (n_tau < 8 || !(tau_max > 0.0))
        throw std::invalid_argument("output_correlations: bad tau grid");
    const int d = sys.hilbert_dim();
    const MatrixXcd liou = build_liouvillian(sys);
    const MatrixXcd rho = steady_state(liou, d);

    MatrixXcd s_coll = MatrixXcd::Zero(d, d);
    for (int j = 0; j < sys.n_atoms; ++j) s_coll += sigma_minus(j, sys.n_atoms);
    const MatrixXcd s_dag = s_coll.adjoint();

    const Complex mean_s = (s_coll * rho).trace();
    const double gw = sys.beta;

    const double dt = tau_max / static_cast<double>(n_tau - 1);
    const MatrixXcd prop = (liou * dt).exp();

    TwoTimeCorrelations out;
    out.tau.resize(n_tau);
    out.bb.resize(n_tau);
    out.bdag_b.resize(n_tau);

    // regression: <A(tau) B(0)> = tr[A e^{L tau}(B rho)]
    VectorXcd v = vec((s_coll * rho).eval());
    const VectorXcd row_s = vec(s_coll.transpose().eval());
    const VectorXcd row_sd = vec(s_dag.transpose().eval());
    for (std::size_t i = 0; i < n_tau; ++i) {
        out.tau[i] = dt * static_cast<double>(i);
        // tr(A r) = vec(A^T) . vec(r), plain sums without conjugation
        const Complex tr_s = (row_s.transpose() * v).value();
        const Complex tr_sd = (row_sd.transpose() * v).value();
        out.bb[i] = gw * (tr_s - mean_s * mean_s);
        out.bdag_b[i] = gw * (tr_sd - std::conj(mean_s) * mean_s);
        if (i + 1 < n_tau) v = prop * v;
    }
    return out;
}

SqueezingSpectrum oracle_squeezing_spectrum(const CascadedSystem& sys, double theta,
                                            const FrequencyGrid& grid, double tau_max,
                                            std::size_t n_tau) {
    grid.validate();
    const TwoTimeCorrelations corr = output_correlations(sys, tau_max, n_tau);
    const std::size_t nt = corr.tau.size();

    double peak = 0.0;
    for (std::size_t i = 0; i < nt; ++i)
        peak = std::max(peak, std::max(std::abs(corr.bb[i]), std::abs(corr.bdag_b[i])));
    const double edge = std::max(std::abs(corr.bb[nt - 1]), std::abs(corr.bdag_b[nt - 1]));
    if (peak > 0.0 && edge > 1e-8 * peak)
        throw std::runtime_error("oracle_squeezing_spectrum: correlators not decayed at tau_max");

    const Complex rot = std::exp(Complex(0.0, 2.0 * theta));
    std::vector<double> g(nt);
    for (std::size_t i = 0; i < nt; ++i)
        g[i] = 0.5 * std::real(rot * corr.bb[i]) + 0.5 * std::real(corr.bdag_b[i]);

    const double dt = corr.tau[1] - corr.tau[0];
    SqueezingSpectrum out;
    out.grid = grid;
    out.theta = theta;
    out.ordering = Ordering::normal;
    out.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.omega[k];
        double acc = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double wt = (i == 0 || i + 1 == nt) ? 0.5 * dt : dt;
            acc += wt * g[i] * std::cos(w * corr.tau[i]);
        }
        out.values[k] = 2.0 * acc;
    }
    return out;
}

SqueezingSpectrum oracle_spectrum_weak_drive(const CascadedSystem& sys, double theta,
                                             const FrequencyGrid& grid, double tau_max,
                                             std::size_t n_tau) {
    CascadedSystem half = sys;
    half.s = 0.5 * sys.s;
    const SqueezingSpectrum s_full = oracle_squeezing_spectrum(sys, theta, grid, tau_max, n_tau);
    const SqueezingSpectrum s_half = oracle_squeezing_spectrum(half, theta, grid, tau_max, n_tau);
    SqueezingSpectrum out = s_full;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = 4.0 * s_half.values[i] - s_full.values[i];
    return out;
}

}  // namespace chsq
