#include "phaselab/rng.hpp"

#include <numbers>
#include <stdexcept>

namespace phaselab {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngSpec RngSpec::substream(std::uint64_t tag) const
{
    std::uint64_t h = seed ^ 0x6a09e667f3bcc909ULL;
    splitmix64(h);
    h ^= tag * 0xd1b54a32d192ed03ULL;
    return {splitmix64(h), stream};
}

Rng::Rng(RngSpec spec)
{
    std::uint64_t h = spec.seed;
    const std::uint64_t a = splitmix64(h);
    h = a ^ (spec.stream * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL);
    for (auto& word : s_)
        word = splitmix64(h);
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::below: empty range");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal()
{
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint32_t Rng::poisson(double mean)
{
    if (!(mean > 0.0))
        return 0;
    if (mean > 30.0)
        throw std::invalid_argument("Rng::poisson: inversion sampler limited to mean <= 30");
    double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint32_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / k;
        const double next_cdf = cdf + p;
        if (next_cdf == cdf) // tail underflow; u sits above the representable CDF
            break;
        cdf = next_cdf;
    }
    return k;
}

std::uint64_t Rng::geometric(double mu)
{
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument("Rng::geometric: mu must lie in [0, 1)");
    if (mu == 0.0)
        return 1;
    const double k = std::ceil(std::log(uniform_open()) / std::log(mu));
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

} // namespace phaselab
