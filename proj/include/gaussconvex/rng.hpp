#pragma once

// Counter-based normal stream: every draw is a pure function of
// (seed, shard, counter), so results do not depend on scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace gaussconvex::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t shard, std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ shard) ^ counter);
}

// uniform in (0,1), never 0
inline double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t shard) : seed_(seed), shard_(shard) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = to_unit(hash3(seed_, shard_, counter_++));
        const double u2 = to_unit(hash3(seed_, shard_, counter_++));
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    double uniform() { return to_unit(hash3(seed_, shard_, counter_++)); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_, shard_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gaussconvex::rng
