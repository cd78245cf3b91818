#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <cstdint>
#include <vector>

#include "phaselab/graph.hpp"
#include "phaselab/rng.hpp"
#include "phaselab/tournament.hpp"

namespace testing {

using phaselab::Edge;
using phaselab::SparseGraph;

inline SparseGraph cycle(std::uint32_t n)
{
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        e.push_back({i, (i + 1) % n});
    return SparseGraph(n, e);
}

inline SparseGraph path(std::uint32_t n)
{
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        e.push_back({i, i + 1});
    return SparseGraph(n, e);
}

inline SparseGraph complete(std::uint32_t n)
{
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            e.push_back({i, j});
    return SparseGraph(n, e);
}

inline SparseGraph petersen()
{
    return SparseGraph(10, {{0, 1}, {0, 4}, {0, 5}, {1, 2}, {1, 6}, {2, 3}, {2, 7}, {3, 4},
                            {3, 8}, {4, 9}, {5, 7}, {5, 8}, {6, 8}, {6, 9}, {7, 9}});
}

// Dense random graph built pair by pair (independent of the skipping sampler).
inline SparseGraph random_graph(std::uint32_t n, double p, phaselab::Rng& rng)
{
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p)
                e.push_back({i, j});
    return SparseGraph(n, e);
}

// Max cut by recounting every bipartition from scratch.
inline std::size_t naive_maxcut(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    std::size_t best = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        std::size_t c = 0;
        for (const Edge& e : g.edges())
            c += ((m >> e.u) ^ (m >> e.v)) & 1;
        best = std::max(best, c);
    }
    return best;
}

struct BlowupInstance {
    phaselab::Tournament t;
    std::vector<phaselab::VertexPair> matching;
    double alpha;
};

// Disjoint alpha-long pairs u < v whose endpoints are ordered by a random
// permutation with every v ahead of its u; the remaining arcs are reversed
// with probability p.
inline BlowupInstance planted_blowup(phaselab::Rng& rng, std::uint32_t n, double alpha, std::uint32_t pairs, double p)
{
    using phaselab::VertexPair;
    const auto span = static_cast<std::uint32_t>(std::ceil(alpha * n));
    std::vector<char> used(n + 1, 0);
    std::vector<VertexPair> matching;
    for (int tries = 0; tries < 1000 && matching.size() < pairs; ++tries) {
        const auto lo = 1 + static_cast<std::uint32_t>(rng.below(n));
        if (lo + span > n)
            continue;
        const auto hi = lo + span + static_cast<std::uint32_t>(rng.below(n - lo - span + 1));
        if (used[lo] || used[hi])
            continue;
        used[lo] = used[hi] = 1;
        matching.push_back({lo, hi});
    }
    std::vector<std::uint32_t> order;
    for (const auto& e : matching) {
        order.push_back(e.lo);
        order.push_back(e.hi);
    }
    rng.shuffle(std::span<std::uint32_t>(order));
    std::vector<std::size_t> rank(n + 1, 0);
    for (std::size_t i = 0; i < order.size(); ++i)
        rank[order[i]] = i;
    for (const auto& e : matching)
        if (rank[e.lo] < rank[e.hi])
            std::swap(rank[e.lo], rank[e.hi]);
    std::vector<VertexPair> back;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = i + 1; j <= n; ++j) {
            const bool planted = used[i] && used[j];
            if (planted ? rank[j] < rank[i] : rng.uniform() < p)
                back.push_back({i, j});
        }
    return {phaselab::Tournament(n, std::move(back)), std::move(matching), alpha};
}

} // namespace testing
