#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mcap {

/// Gaussian generator with an explicit Box-Muller transform so output
/// sequences are identical across standard library implementations.
class GaussianRng {
public:
    explicit GaussianRng(uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return (engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// FNV-1a, used to derive per-point seeds from parameter tuples.
inline uint64_t fnv1a64(const void* data, std::size_t len,
                        uint64_t hash = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= p[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace mcap
