#include "phaselab/kernels/partition_score.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>

namespace phaselab::kernels::detail {

namespace {

// Violations for the eight masks base..base+7.
inline __m256i score8(std::span<const ParityEdge> edges, __m256i masks)
{
    const __m256i one = _mm256_set1_epi32(1);
    __m256i acc = _mm256_setzero_si256();
    for (const ParityEdge& e : edges) {
        const __m256i a = _mm256_srl_epi32(masks, _mm_cvtsi32_si128(e.u));
        const __m256i b = _mm256_srl_epi32(masks, _mm_cvtsi32_si128(e.v));
        __m256i x = _mm256_xor_si256(a, b);
        x = _mm256_xor_si256(x, _mm256_set1_epi32(e.odd));
        acc = _mm256_add_epi32(acc, _mm256_and_si256(x, one));
    }
    return acc;
}

inline __m256i lane_offsets()
{
    return _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
}

} // namespace

void score_masks_avx2(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out)
{
    std::size_t i = 0;
    alignas(32) std::array<std::uint32_t, 8> lanes{};
    for (; i + 8 <= out.size(); i += 8) {
        const __m256i masks = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first + i)), lane_offsets());
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.data()), score8(edges, masks));
        for (std::size_t k = 0; k < 8; ++k)
            out[i + k] = static_cast<std::uint16_t>(lanes[k]);
    }
    if (i < out.size())
        score_masks_scalar(edges, first + static_cast<std::uint32_t>(i), out.subspan(i));
}

MinScore min_score_avx2(std::span<const ParityEdge> edges, std::uint32_t count)
{
    if (count < 8)
        return min_score_scalar(edges, count);

    __m256i best = _mm256_set1_epi32(0x7fffffff);
    __m256i best_mask = _mm256_setzero_si256();
    const __m256i step = _mm256_set1_epi32(8);
    __m256i masks = lane_offsets();
    std::uint32_t base = 0;
    for (; base + 8 <= count; base += 8) {
        const __m256i s = score8(edges, masks);
        // strict improvement only, so each lane keeps its earliest mask
        const __m256i better = _mm256_cmpgt_epi32(best, s);
        best = _mm256_blendv_epi8(best, s, better);
        best_mask = _mm256_blendv_epi8(best_mask, masks, better);
        masks = _mm256_add_epi32(masks, step);
        if (_mm256_movemask_epi8(_mm256_cmpeq_epi32(best, _mm256_setzero_si256())) != 0) {
            base += 8;
            break;
        }
    }

    alignas(32) std::array<std::int32_t, 8> sc{}, mk{};
    _mm256_store_si256(reinterpret_cast<__m256i*>(sc.data()), best);
    _mm256_store_si256(reinterpret_cast<__m256i*>(mk.data()), best_mask);
    MinScore result{static_cast<std::uint32_t>(sc[0]), static_cast<std::uint32_t>(mk[0])};
    for (std::size_t k = 1; k < 8; ++k) {
        const auto s = static_cast<std::uint32_t>(sc[k]);
        const auto m = static_cast<std::uint32_t>(mk[k]);
        if (s < result.score || (s == result.score && m < result.mask))
            result = {s, m};
    }
    if (result.score == 0)
        return result;
    // tail masks base..count-1 are all larger than anything seen above
    for (std::uint32_t m = base; m < count; ++m) {
        std::uint32_t s = 0;
        for (const ParityEdge& e : edges)
            s += ((m >> e.u) ^ (m >> e.v) ^ e.odd) & 1u;
        if (s < result.score) {
            result = {s, m};
            if (s == 0)
                break;
        }
    }
    return result;
}

} // namespace phaselab::kernels::detail
