#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace genldpc {

// SplitMix64 finalizer, used to derive independent stream seeds from
// (seed, stream ids) tuples.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (0x2545f4914f6cdd1dULL * b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

// Deterministic splittable RNG stream. mt19937_64 output is fully specified
// by the standard and the Gaussian/Rayleigh transforms are hand-rolled, so a
// stream is bit-reproducible across platforms and compilers. Workers derive
// their own streams via the (seed, id...) constructors; nothing is shared.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed) : engine_(mix64(seed)) {}
    SplitRng(std::uint64_t seed, std::uint64_t id) : engine_(mix64(seed, id)) {}
    SplitRng(std::uint64_t seed, std::uint64_t id_a, std::uint64_t id_b)
        : engine_(mix64(seed, id_a, id_b)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0,1), 53-bit resolution
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n), rejection sampled to avoid modulo bias
    std::size_t below(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

    // standard normal via Box-Muller; spare value cached
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so the log stays finite
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Rayleigh magnitude normalized to E[h^2] = 1 (h^2 ~ Exp(1))
    double rayleigh_unit_power() {
        const double u = 1.0 - uniform01();
        return std::sqrt(-std::log(u));
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace genldpc
