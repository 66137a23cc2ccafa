#include "chsq/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace chsq::fft {

namespace {

// One cached plan + buffers per transform length. FFTW planning is not
// thread-safe and new-array execution has alignment constraints, so all
// transforms copy through the cached buffers under the lock.
struct R2cEntry {
    double* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};
struct C2rEntry {
    fftw_complex* in = nullptr;
    double* out = nullptr;
    fftw_plan plan = nullptr;
};

std::mutex g_mutex;
std::map<std::size_t, R2cEntry> g_r2c;
std::map<std::size_t, C2rEntry> g_c2r;

R2cEntry& r2c_entry(std::size_t n) {
    auto it = g_r2c.find(n);
    if (it != g_r2c.end()) return it->second;
    R2cEntry e;
    e.in = fftw_alloc_real(n);
    e.out = fftw_alloc_complex(n / 2 + 1);
    e.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), e.in, e.out, FFTW_ESTIMATE);
    if (!e.plan) throw std::runtime_error("fftw r2c planning failed");
    return g_r2c.emplace(n, e).first->second;
}

C2rEntry& c2r_entry(std::size_t n) {
    auto it = g_c2r.find(n);
    if (it != g_c2r.end()) return it->second;
    C2rEntry e;
    e.in = fftw_alloc_complex(n / 2 + 1);
    e.out = fftw_alloc_real(n);
    e.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), e.in, e.out, FFTW_ESTIMATE);
    if (!e.plan) throw std::runtime_error("fftw c2r planning failed");
    return g_c2r.emplace(n, e).first->second;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("rfft: empty input");
    std::vector<std::complex<double>> out(n / 2 + 1);
    std::lock_guard<std::mutex> lock(g_mutex);
    R2cEntry& e = r2c_entry(n);
    std::memcpy(e.in, x.data(), n * sizeof(double));
    fftw_execute(e.plan);
    // std::complex<double> is layout-compatible with double[2]
    const auto* src = reinterpret_cast<const std::complex<double>*>(e.out);
    std::copy(src, src + n / 2 + 1, out.begin());
    return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& half, std::size_t n) {
    if (half.size() != n / 2 + 1) throw std::invalid_argument("irfft: half-spectrum length mismatch");
    std::vector<double> out(n);
    std::lock_guard<std::mutex> lock(g_mutex);
    C2rEntry& e = c2r_entry(n);
    std::memcpy(e.in, half.data(), (n / 2 + 1) * sizeof(fftw_complex));
    fftw_execute(e.plan);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = e.out[i] * scale;
    return out;
}

}  // namespace chsq::fft
