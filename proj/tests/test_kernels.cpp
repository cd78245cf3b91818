#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "phaselab/kernels/partition_score.hpp"
#include "phaselab/rng.hpp"

using namespace phaselab;
using namespace phaselab::kernels;

namespace {

std::vector<ParityEdge> random_edges(Rng& rng, std::uint32_t vertices, std::size_t count)
{
    std::vector<ParityEdge> e(count);
    for (auto& x : e)
        x = {static_cast<std::uint8_t>(rng.below(vertices)), static_cast<std::uint8_t>(rng.below(vertices)),
             static_cast<std::uint8_t>(rng.below(2))};
    return e;
}

std::uint32_t reference(const std::vector<ParityEdge>& edges, std::uint32_t m)
{
    std::uint32_t s = 0;
    for (const auto& e : edges) {
        const bool same = ((m >> e.u) & 1) == ((m >> e.v) & 1);
        s += (same && e.odd) || (!same && !e.odd);
    }
    return s;
}

} // namespace

TEST_CASE("scalar kernel matches the definition")
{
    Rng rng(RngSpec{200, 0});
    const auto edges = random_edges(rng, 10, 17);
    std::vector<std::uint16_t> out(1024);
    score_masks(edges, 0, out, Isa::scalar);
    for (std::uint32_t m = 0; m < 1024; ++m)
        CHECK(out[m] == reference(edges, m));
    const MinScore best = min_score(edges, 1024, Isa::scalar);
    std::uint32_t want = 1u << 30, at = 0;
    for (std::uint32_t m = 0; m < 1024; ++m)
        if (reference(edges, m) < want) {
            want = reference(edges, m);
            at = m;
        }
    CHECK(best.score == want);
    CHECK(best.mask == at);
}

TEST_CASE("argument checks")
{
    const std::vector<ParityEdge> bad = {{32, 0, 1}};
    CHECK_THROWS(min_score(bad, 4, Isa::scalar));
    const std::vector<ParityEdge> ok = {{1, 0, 1}};
    CHECK_THROWS(min_score(ok, 0, Isa::scalar));
    CHECK(min_score(ok, 1, Isa::scalar).score == 1); // odd edge inside side 0
    CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
}

TEST_CASE("AVX2 kernel is equivalent to the scalar reference")
{
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 unavailable on this CPU; equivalence not exercised");
        return;
    }
    CHECK(best_isa() == Isa::avx2);
    Rng rng(RngSpec{201, 0});
    for (int t = 0; t < 400; ++t) {
        const std::uint32_t vertices = 1 + static_cast<std::uint32_t>(rng.below(20));
        const std::size_t count = rng.below(60);
        const auto edges = random_edges(rng, vertices, count);
        const std::uint32_t masks = 1 + static_cast<std::uint32_t>(rng.below(1u << std::min(vertices, 14u)));
        const std::uint32_t first = static_cast<std::uint32_t>(rng.below(1000));

        std::vector<std::uint16_t> a(masks), b(masks);
        score_masks(edges, first, a, Isa::scalar);
        score_masks(edges, first, b, Isa::avx2);
        CHECK(a == b);

        const MinScore x = min_score(edges, masks, Isa::scalar);
        const MinScore y = min_score(edges, masks, Isa::avx2);
        CHECK(x.score == y.score);
        CHECK(x.mask == y.mask);
    }
}

TEST_CASE("AVX2 early exit keeps the first zero")
{
    if (!isa_available(Isa::avx2))
        return;
    // odd edges within side 0 vanish only when both ends agree; several zero masks
    const std::vector<ParityEdge> edges = {{0, 1, 0}, {2, 3, 0}, {4, 5, 1}};
    for (std::uint32_t count : {7u, 8u, 9u, 64u, 65u}) {
        const MinScore x = min_score(edges, count, Isa::scalar);
        const MinScore y = min_score(edges, count, Isa::avx2);
        CHECK(x.score == y.score);
        CHECK(x.mask == y.mask);
    }
}
