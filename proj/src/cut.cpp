#include "phaselab/cut.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "phaselab/errors.hpp"
#include "phaselab/kernels/partition_score.hpp"

namespace phaselab {

CutResult exact_maxcut(const SparseGraph& g, std::size_t guard)
{
    const std::size_t n = g.num_vertices();
    guard = std::min<std::size_t>(guard, 32);
    if (n > guard)
        throw GuardError("exact_maxcut: n = " + std::to_string(n) + " exceeds guard " + std::to_string(guard));

    CutResult best;
    best.partition = {std::vector<std::uint8_t>(n, 0), 2};
    if (n <= 1 || g.num_edges() == 0)
        return best;

    // Vertex v lives at bit n-1-v so that numeric order on masks is
    // lexicographic order on label vectors. Vertex 0 (top bit) never flips.
    auto bit = [n](Vertex v) { return std::uint64_t{1} << (n - 1 - v); };
    std::vector<std::uint64_t> adj(n, 0);
    for (const Edge& e : g.edges()) {
        adj[e.u] |= bit(e.v);
        adj[e.v] |= bit(e.u);
    }
    std::uint64_t mask = 0;
    std::uint64_t best_mask = 0;
    long cut = 0;
    long best_cut = 0;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t i = 1; i < steps; ++i) {
        // Gray code step i flips bit ctz(i), i.e. vertex n-1-ctz(i)
        const int b = std::countr_zero(i);
        const auto v = static_cast<Vertex>(n - 1 - static_cast<std::size_t>(b));
        const long deg = std::popcount(adj[v]);
        const long ones = std::popcount(adj[v] & mask);
        const bool on_one = (mask >> b) & 1u;
        const long cross = on_one ? deg - ones : ones;
        cut += deg - 2 * cross;
        mask ^= std::uint64_t{1} << b;
        if (cut > best_cut || (cut == best_cut && mask < best_mask)) {
            best_cut = cut;
            best_mask = mask;
        }
    }
    best.cut_size = static_cast<std::size_t>(best_cut);
    for (Vertex v = 0; v < n; ++v)
        best.partition.label[v] = (best_mask & bit(v)) ? 1 : 0;
    return best;
}

std::size_t dist_bp_exact(const SparseGraph& g, std::size_t guard)
{
    return g.num_edges() - exact_maxcut(g, guard).cut_size;
}

std::size_t dist_bp_exact_by_core(const SparseGraph& g, std::size_t guard)
{
    const InducedSubgraph core = two_core(g);
    std::size_t total = 0;
    for (const auto& comp : connected_components(core.graph)) {
        const InducedSubgraph piece = induced_subgraph(core.graph, comp);
        total += dist_bp_exact(piece.graph, guard);
    }
    return total;
}

CutResult giant_cut_algorithm(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    CutResult result;
    std::vector<char> deleted(g.num_edges(), 0);
    const auto components = connected_components(g);

    // (ii) every component but the largest: drop edges that clash with a BFS colouring
    std::vector<std::int8_t> color(n, -1);
    std::vector<Vertex> queue;
    for (std::size_t c = 1; c < components.size(); ++c) {
        const Vertex root = components[c].front();
        if (components[c].size() < 3)
            continue;
        color[root] = 0;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Vertex v = queue[head];
            for (const Incidence& inc : g.neighbors(v)) {
                if (color[inc.neighbor] < 0) {
                    color[inc.neighbor] = static_cast<std::int8_t>(color[v] ^ 1);
                    queue.push_back(inc.neighbor);
                } else if (color[inc.neighbor] == color[v]) {
                    deleted[inc.edge] = 1;
                }
            }
        }
    }

    // (iii) the largest component: cut every kernel path of its 2-core
    if (!components.empty()) {
        const InducedSubgraph giant = induced_subgraph(g, components.front());
        const InducedSubgraph core = two_core(giant.graph);
        for (const KernelPath& path : kernel_paths(core.graph))
            deleted[giant.to_host_edge[core.to_host_edge[path.representative()]]] = 1;
    }

    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (deleted[e])
            result.deleted.push_back(e);

    // (iv) the remaining graph is bipartite; its colouring certifies the cut
    const SparseGraph rest = g.without_edges(result.deleted);
    auto part = is_bipartite(rest);
    if (!part)
        throw std::logic_error("giant_cut_algorithm: remaining graph is not bipartite");
    result.partition = std::move(*part);
    result.cut_size = g.num_edges() - result.deleted.size();
    return result;
}

std::vector<EdgeId> odd_path_bipartization(const ExpandedCore& core)
{
    if (!core.has_metadata())
        throw std::invalid_argument("odd_path_bipartization: core lacks kernel path metadata");
    std::vector<EdgeId> out;
    for (std::size_t e = 0; e < core.path.size(); ++e) {
        if (core.length[e] % 2 == 0)
            continue;
        const Edge& k = core.kernel.edges[e];
        // last edge when walking from the lower kernel endpoint
        out.push_back(k.u <= k.v ? core.path[e].back() : core.path[e].front());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EdgeId> odd_path_bipartization(const SparseGraph& core)
{
    std::vector<EdgeId> out;
    for (const KernelPath& path : kernel_paths(core))
        if (path.length() % 2 == 1)
            out.push_back(path.representative());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t min_bad_edges(const KernelMultigraph& kernel, const std::vector<bool>& parities)
{
    if (parities.size() != kernel.edges.size())
        throw std::invalid_argument("min_bad_edges: one parity per kernel edge required");
    if (kernel.num_vertices > bad_edge_guard)
        throw GuardError("min_bad_edges: kernel has " + std::to_string(kernel.num_vertices) +
                         " vertices, guard is " + std::to_string(bad_edge_guard));
    if (kernel.num_vertices == 0)
        return 0;
    std::vector<kernels::ParityEdge> edges;
    edges.reserve(kernel.edges.size());
    for (std::size_t e = 0; e < kernel.edges.size(); ++e)
        edges.push_back({static_cast<std::uint8_t>(kernel.edges[e].u), static_cast<std::uint8_t>(kernel.edges[e].v),
                         static_cast<std::uint8_t>(parities[e] ? 1 : 0)});
    // the top vertex stays on side 0; complements score identically
    const std::uint32_t count = 1u << (kernel.num_vertices - 1);
    return kernels::min_score(edges, count).score;
}

std::pair<KernelMultigraph, std::vector<bool>> contract_kernel(const SparseGraph& core)
{
    KernelMultigraph k;
    std::vector<bool> parity;
    std::vector<std::uint32_t> index(core.num_vertices(), 0xffffffffu);
    for (Vertex v = 0; v < core.num_vertices(); ++v) {
        if (core.degree(v) >= 3) {
            index[v] = k.num_vertices++;
            k.degree.push_back(0);
            k.origin.push_back(v);
        }
    }
    for (const KernelPath& path : kernel_paths(core)) {
        if (index[path.first] == 0xffffffffu)
            continue;
        const Vertex a = index[path.first];
        const Vertex b = index[path.last];
        k.edges.push_back({a, b});
        ++k.degree[a];
        ++k.degree[b];
        parity.push_back(path.length() % 2 == 1);
    }
    return {std::move(k), std::move(parity)};
}

DistBound dist_bp_lower_bound(const SparseGraph& g, std::size_t exact_guard)
{
    DistBound bound;
    const InducedSubgraph core = two_core(g);
    for (const auto& comp : connected_components(core.graph)) {
        if (comp.size() < 3)
            continue;
        const InducedSubgraph piece = induced_subgraph(core.graph, comp);
        if (piece.graph.num_vertices() <= exact_guard) {
            bound.value += dist_bp_exact(piece.graph, exact_guard);
            continue;
        }
        if (piece.graph.num_edges() == piece.graph.num_vertices()) {
            // bare cycle
            bound.value += piece.graph.num_edges() % 2;
            continue;
        }
        bound.exact = false;
        const auto [kernel, parity] = contract_kernel(piece.graph);
        if (kernel.num_vertices <= bad_edge_guard)
            bound.value += min_bad_edges(kernel, parity);
    }
    return bound;
}

Sandwich sandwich_check(const ExpandedCore& core, std::size_t exact_guard)
{
    Sandwich s;
    std::vector<bool> parity(core.length.size());
    for (std::size_t e = 0; e < parity.size(); ++e)
        parity[e] = core.length[e] % 2 == 1;
    s.lower = min_bad_edges(core.kernel, parity);
    s.upper = odd_path_bipartization(core).size();
    if (core.graph.num_vertices() <= exact_guard)
        s.exact = dist_bp_exact(core.graph, exact_guard);
    const std::size_t mid = s.exact.value_or(s.lower);
    if (s.lower > mid || mid > s.upper || s.lower > s.upper)
        throw std::logic_error("sandwich_check: bounds out of order: " + std::to_string(s.lower) + " / " +
                               (s.exact ? std::to_string(*s.exact) : std::string("-")) + " / " +
                               std::to_string(s.upper));
    return s;
}

} // namespace phaselab
