#include "phaselab/random_models.hpp"

#include <cmath>
#include <stdexcept>

namespace phaselab {

namespace {

/// Calls emit(w, v) for every selected pair 0 <= w < v < n (Batagelj-Brandes).
template <typename Emit>
void skip_pairs(std::uint32_t n, double p, RngSpec spec, Emit&& emit)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    if (n == 0)
        throw std::invalid_argument("vertex count must be at least 1");
    if (p == 0.0)
        return;
    if (p == 1.0) {
        for (std::uint32_t v = 1; v < n; ++v)
            for (std::uint32_t w = 0; w < v; ++w)
                emit(w, v);
        return;
    }
    Rng rng(spec);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        const double skip = std::floor(std::log(rng.uniform_open()) / log_q);
        // skips beyond the remaining pair count end the scan
        if (skip > 1e18)
            break;
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn)
            emit(static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(v));
    }
}

} // namespace

SparseGraph sample_gnp(std::uint32_t n, double p, RngSpec rng)
{
    std::vector<Edge> edges;
    const double expected = p * 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    if (expected < 1e9)
        edges.reserve(static_cast<std::size_t>(expected * 1.05) + 16);
    skip_pairs(n, p, rng, [&](std::uint32_t w, std::uint32_t v) { edges.push_back({w, v}); });
    return SparseGraph(n, std::move(edges));
}

Tournament sample_tournament(std::uint32_t n, double p, RngSpec rng)
{
    std::vector<VertexPair> back;
    skip_pairs(n, p, rng, [&](std::uint32_t w, std::uint32_t v) { back.push_back({w + 1, v + 1}); });
    return Tournament(n, std::move(back));
}

} // namespace phaselab
