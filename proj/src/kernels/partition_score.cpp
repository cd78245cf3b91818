#include "phaselab/kernels/partition_score.hpp"

#include <stdexcept>
#include <string>

namespace phaselab::kernels {

bool isa_available(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(PHASELAB_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa best_isa()
{
    static const Isa chosen = isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    return chosen;
}

const char* isa_name(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

namespace {

void check(std::span<const ParityEdge> edges, Isa isa)
{
    if (!isa_available(isa))
        throw std::invalid_argument(std::string("partition kernel: ISA not available: ") + isa_name(isa));
    for (const ParityEdge& e : edges)
        if (e.u >= 32 || e.v >= 32)
            throw std::invalid_argument("partition kernel: vertex index above 31");
    if (edges.size() > 0xffff)
        throw std::invalid_argument("partition kernel: too many edges");
}

} // namespace

void score_masks(std::span<const ParityEdge> edges, std::uint32_t first, std::span<std::uint16_t> out, Isa isa)
{
    check(edges, isa);
#if defined(PHASELAB_HAVE_AVX2)
    if (isa == Isa::avx2)
        return detail::score_masks_avx2(edges, first, out);
#endif
    detail::score_masks_scalar(edges, first, out);
}

MinScore min_score(std::span<const ParityEdge> edges, std::uint32_t count, Isa isa)
{
    check(edges, isa);
    if (count == 0 || count > 0x80000000u)
        throw std::invalid_argument("partition kernel: mask count must lie in [1, 2^31]");
#if defined(PHASELAB_HAVE_AVX2)
    if (isa == Isa::avx2)
        return detail::min_score_avx2(edges, count);
#endif
    return detail::min_score_scalar(edges, count);
}

} // namespace phaselab::kernels
