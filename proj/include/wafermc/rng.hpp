#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace wafermc {

/// Seeded random source with a pinned output definition. The engine is
/// std::mt19937_64, whose sequence is fixed by the standard; the mappings
/// to doubles and bounded integers are implemented here instead of using
/// std::*_distribution, whose algorithms are implementation-defined.
/// Integer draws (and therefore sampled index sets) are bit-reproducible
/// everywhere; Gaussian draws are reproducible up to libm rounding.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no
    /// modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        // 2^64 mod bound, computed in wrapping arithmetic.
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % bound;
        }
    }

    /// Standard normal draw (Box-Muller, cosine branch first).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wafermc
