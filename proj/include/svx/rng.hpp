#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace svx {

// splitmix64; used both as a stream generator and to derive sub-seeds.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // standard normal, Box-Muller
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Deterministic sub-seed derivation, e.g. per-instance LIME seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    Rng r(base ^ (0x51d345b1ULL + index * 0x2545f4914f6cdd1dULL));
    return r.next_u64();
}

}  // namespace svx
