#ifndef MUBTOMO_RNG_HPP
#define MUBTOMO_RNG_HPP

#include <cstdint>

namespace mubtomo {

/// Counter-based generator. Output i (i = 0, 1, ...) is the (i+1)-th output
/// of SplitMix64 started from state `seed`:
///
///     z = seed + (i + 1) * 0x9E3779B97F4A7C15        (mod 2^64)
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     return z ^ (z >> 31)
///
/// For seed 0 the first outputs are 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
/// 0x06C45D188009454F. Uniform doubles take the top 53 bits: (z >> 11) * 2^-53.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

} // namespace mubtomo

#endif
