#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace phaselab {

/// Identifies one reproducible random stream: (seed, stream) fixes every draw.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Independent child stream for one stage of a trial (e.g. graph vs. model).
    RngSpec substream(std::uint64_t tag) const;

    friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** keyed by a hash of an RngSpec. All distributions are
/// implemented here rather than taken from <random>, whose distribution
/// algorithms differ between standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(RngSpec spec);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller; the second variate is discarded so that
    /// the stream position depends only on the number of calls.
    double normal();

    /// Poisson(mean) by sequential inversion; mean <= 0 gives 0.
    std::uint32_t poisson(double mean);

    /// Geom(1 - mu) on {1, 2, ...}: P(k) = mu^(k-1) (1 - mu), by inverse CDF.
    std::uint64_t geometric(double mu);

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

} // namespace phaselab
