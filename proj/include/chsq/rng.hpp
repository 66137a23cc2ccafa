#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace chsq {

// Deterministic Gaussian stream. mt19937_64 output is fixed by the standard
// and the Box-Muller mapping below avoids std::normal_distribution, whose
// algorithm is implementation-defined.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    // uniform in (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace chsq
