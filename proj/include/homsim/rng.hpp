#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace homsim::rng {

// splitmix64; used to derive well-separated engine seeds from a master
// seed plus a stream index.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0xA0761D6478BD642Full * (index + 1));
    std::uint64_t b = splitmix64(s);
    return a ^ b;
}

// Deterministic stream: mt19937_64 output is pinned by the standard,
// and uniform01 avoids std::uniform_real_distribution (whose mapping
// is implementation-defined).
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform in [0, 1) with 53-bit resolution
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Poisson draw by chunked product-of-uniforms; exact and
    // deterministic, adequate for the means used here (≲ 1e4).
    std::uint64_t poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 500.0) {
            total += poisson_knuth(500.0);
            mean -= 500.0;
        }
        return total + poisson_knuth(mean);
    }

  private:
    std::uint64_t poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t n = 0;
        do {
            prod *= uniform01();
            if (prod < limit) return n;
            ++n;
        } while (n < 100000);
        return n;
    }

    std::mt19937_64 eng_;
};

}  // namespace homsim::rng
