#pragma once

// Bulk scoring of vertex bipartitions against parity-labelled edges.
//
// A bipartition of up to 32 vertices is a bit mask (bit v set = vertex v on
// side 1). An edge {u, v} labelled `odd` is violated by mask m when
//
//     ((m >> u) ^ (m >> v) ^ odd) & 1
//
// i.e. an odd edge inside a side or an even edge across the cut. Loops
// (u == v) are violated exactly when odd. With every edge labelled odd the
// score is the number of monochromatic edges, so the same kernel counts
// uncut edges of a plain graph.
//
// Two implementations: a portable scalar reference and an AVX2 variant that
// scores eight masks per instruction. They must agree bit for bit.

#include <cstdint>
#include <span>

namespace phaselab::kernels {

struct ParityEdge {
    std::uint8_t u;
    std::uint8_t v;
    std::uint8_t odd;
};

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa);
/// Widest implementation the running CPU supports.
Isa best_isa();
const char* isa_name(Isa isa);

/// out[i] = violations of mask (first + i).
void score_masks(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out,
                 Isa isa);

struct MinScore {
    std::uint32_t score;
    std::uint32_t mask; // smallest mask attaining the score
};

/// Minimum over masks [0, count). count must be >= 1.
MinScore min_score(std::span<const ParityEdge> edges, std::uint32_t count, Isa isa);
inline MinScore min_score(std::span<const ParityEdge> edges, std::uint32_t count)
{
    return min_score(edges, count, best_isa());
}

namespace detail {
void score_masks_scalar(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out);
MinScore min_score_scalar(std::span<const ParityEdge> edges, std::uint32_t count);
#if defined(PHASELAB_HAVE_AVX2)
void score_masks_avx2(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out);
MinScore min_score_avx2(std::span<const ParityEdge> edges, std::uint32_t count);
#endif
} // namespace detail

} // namespace phaselab::kernels
