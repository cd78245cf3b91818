#include "phaselab/kernels/partition_score.hpp"

namespace phaselab::kernels::detail {

namespace {

inline std::uint32_t violations(std::span<const ParityEdge> edges, std::uint32_t m)
{
    std::uint32_t s = 0;
    for (const ParityEdge& e : edges)
        s += ((m >> e.u) ^ (m >> e.v) ^ e.odd) & 1u;
    return s;
}

} // namespace

void score_masks_scalar(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out)
{
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint16_t>(violations(edges, first + static_cast<std::uint32_t>(i)));
}

MinScore min_score_scalar(std::span<const ParityEdge> edges, std::uint32_t count)
{
    MinScore best{violations(edges, 0), 0};
    for (std::uint32_t m = 1; m < count && best.score > 0; ++m) {
        const std::uint32_t s = violations(edges, m);
        if (s < best.score)
            best = {s, m};
    }
    return best;
}

} // namespace phaselab::kernels::detail
