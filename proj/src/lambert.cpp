#include "chsq/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace chsq {

double lambert_w(double x) {
    constexpr double branch_point = -0.36787944117144233;  // -1/e
    if (std::isnan(x)) throw std::domain_error("lambert_w: NaN argument");
    if (x < branch_point - 1e-14) throw std::domain_error("lambert_w: x below -1/e");
    if (x == 0.0) return 0.0;

    double w;
    if (x > 0.0) {
        w = std::log1p(x);
    } else if (x > -0.25) {
        w = x * (1.0 - x + 1.5 * x * x);  // series about 0
    } else {
        // expansion about the branch point; Halley degenerates there (f' -> 0)
        const double q = 2.0 * (1.0 + std::exp(1.0) * std::max(x, branch_point));
        const double sq = std::sqrt(std::max(q, 0.0));
        w = -1.0 + sq - q / 3.0;
        if (sq < 1e-7) return w;
    }

    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (1.0 + w);
        if (std::abs(fp) < 1e-300) break;
        const double fpp = ew * (2.0 + w);
        const double denom = fp - 0.5 * f * fpp / fp;
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-12 * std::max(std::abs(w), 1e-300)) break;
    }
    return w;
}

double lambert_beer_transmission(double s, double beta, double n_atoms) {
    if (s < 0.0) throw std::domain_error("lambert_beer_transmission: s must be >= 0");
    const double od = 4.0 * beta * n_atoms;
    if (s < 1e-9) return std::exp(-od);  // W(x) ~ x for small x
    const double y = std::log(s) + s - od;  // ln of the W argument
    if (y > 600.0) {
        // asymptotic W(x) = ln x - ln ln x + ln ln x / ln x + ...
        const double l2 = std::log(y);
        return (y - l2 + l2 / y + l2 * (l2 - 2.0) / (2.0 * y * y)) / s;
    }
    return lambert_w(s * std::exp(s - od)) / s;
}

}  // namespace chsq
