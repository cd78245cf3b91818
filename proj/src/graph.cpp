#include "phaselab/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace phaselab {

namespace {

constexpr std::uint32_t unreached = std::numeric_limits<std::uint32_t>::max();

} // namespace

SparseGraph::SparseGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
{
    if (n_ >= unreached)
        throw std::invalid_argument("graph: too many vertices");
    if (edges_.size() >= unreached)
        throw std::invalid_argument("graph: too many edges");

    std::vector<std::size_t> deg(n_ + 1, 0);
    for (const Edge& e : edges_) {
        if (e.u >= n_ || e.v >= n_)
            throw std::invalid_argument("graph: endpoint out of range in edge " + std::to_string(e.u) +
                                        " " + std::to_string(e.v));
        if (e.u == e.v)
            throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(e.u));
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v)
        offsets_[v + 1] = offsets_[v] + deg[v];
    incidences_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
        const Edge& e = edges_[id];
        incidences_[fill[e.u]++] = {e.v, id};
        incidences_[fill[e.v]++] = {e.u, id};
    }
    for (std::size_t v = 0; v < n_; ++v) {
        auto first = incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
        auto last = incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
        std::sort(first, last, [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
        auto dup = std::adjacent_find(first, last, [](const Incidence& a, const Incidence& b) {
            return a.neighbor == b.neighbor;
        });
        if (dup != last)
            throw std::invalid_argument("graph: duplicate edge " + std::to_string(v) + " " +
                                        std::to_string(dup->neighbor));
    }
}

std::size_t SparseGraph::min_degree() const
{
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n_; ++v)
        best = std::min(best, degree(static_cast<Vertex>(v)));
    return n_ == 0 ? 0 : best;
}

SparseGraph SparseGraph::without_edges(std::span<const EdgeId> removed) const
{
    std::vector<char> drop(edges_.size(), 0);
    for (EdgeId e : removed) {
        if (e >= edges_.size())
            throw std::invalid_argument("without_edges: edge id out of range");
        drop[e] = 1;
    }
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (EdgeId e = 0; e < edges_.size(); ++e)
        if (!drop[e])
            kept.push_back(edges_[e]);
    return SparseGraph(n_, std::move(kept));
}

std::size_t VertexPartition::cut_size(const SparseGraph& g) const
{
    std::size_t cut = 0;
    for (const Edge& e : g.edges())
        cut += label[e.u] != label[e.v];
    return cut;
}

std::vector<std::vector<Vertex>> connected_components(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    std::vector<std::uint32_t> comp(n, unreached);
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (comp[s] != unreached)
            continue;
        const auto id = static_cast<std::uint32_t>(out.size());
        auto& members = out.emplace_back();
        comp[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (const Incidence& inc : g.neighbors(v)) {
                if (comp[inc.neighbor] == unreached) {
                    comp[inc.neighbor] = id;
                    stack.push_back(inc.neighbor);
                }
            }
        }
        std::sort(members.begin(), members.end());
    }
    // Discovery order already sorts by smallest vertex, so a stable sort on
    // size gives the required tie-break.
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

InducedSubgraph induced_subgraph(const SparseGraph& g, std::span<const Vertex> vertices)
{
    std::vector<std::uint32_t> local(g.num_vertices(), unreached);
    InducedSubgraph sub;
    sub.to_host_vertex.assign(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= g.num_vertices() || local[vertices[i]] != unreached)
            throw std::invalid_argument("induced_subgraph: bad vertex list");
        local[vertices[i]] = static_cast<std::uint32_t>(i);
    }
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        if (local[ed.u] != unreached && local[ed.v] != unreached) {
            edges.push_back({local[ed.u], local[ed.v]});
            sub.to_host_edge.push_back(e);
        }
    }
    sub.graph = SparseGraph(vertices.size(), std::move(edges));
    return sub;
}

InducedSubgraph two_core(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> deg(n);
    std::vector<char> removed(n, 0);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] < 2) {
            removed[v] = 1;
            queue.push_back(v);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const Incidence& inc : g.neighbors(queue[head])) {
            Vertex w = inc.neighbor;
            if (!removed[w] && --deg[w] < 2) {
                removed[w] = 1;
                queue.push_back(w);
            }
        }
    }
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < n; ++v)
        if (!removed[v])
            keep.push_back(v);
    return induced_subgraph(g, keep);
}

std::optional<VertexPartition> is_bipartite(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    VertexPartition part{std::vector<std::uint8_t>(n, 0), 2};
    std::vector<char> seen(n, 0);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        seen[s] = 1;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Vertex v = queue[head];
            for (const Incidence& inc : g.neighbors(v)) {
                Vertex w = inc.neighbor;
                if (!seen[w]) {
                    seen[w] = 1;
                    part.label[w] = part.label[v] ^ 1;
                    queue.push_back(w);
                } else if (part.label[w] == part.label[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return part;
}

std::optional<std::size_t> odd_girth(const SparseGraph& g)
{
    const std::size_t n = g.num_vertices();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<std::uint32_t> dist(n, unreached);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        queue.assign(1, s);
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Vertex v = queue[head];
            // any odd cycle found from here is at least 2*dist+1 long
            if (2 * static_cast<std::size_t>(dist[v]) + 1 >= best)
                break;
            for (const Incidence& inc : g.neighbors(v)) {
                Vertex w = inc.neighbor;
                if (dist[w] == unreached) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                } else if (dist[w] == dist[v]) {
                    best = std::min(best, 2 * static_cast<std::size_t>(dist[v]) + 1);
                }
            }
        }
        for (Vertex v : queue)
            dist[v] = unreached;
    }
    if (best == std::numeric_limits<std::size_t>::max())
        return std::nullopt;
    return best;
}

std::vector<KernelPath> kernel_paths(const SparseGraph& core)
{
    const std::size_t n = core.num_vertices();
    for (Vertex v = 0; v < n; ++v)
        if (core.degree(v) < 2)
            throw std::invalid_argument("kernel_paths: vertex " + std::to_string(v) + " has degree " +
                                        std::to_string(core.degree(v)));

    std::vector<char> used(core.num_edges(), 0);
    std::vector<KernelPath> paths;

    auto walk = [&](Vertex start, EdgeId first_edge) {
        KernelPath path{start, start, {}};
        EdgeId e = first_edge;
        Vertex cur = start;
        for (;;) {
            used[e] = 1;
            path.edges.push_back(e);
            cur = core.other(e, cur);
            if (core.degree(cur) != 2 || cur == start)
                break;
            auto nb = core.neighbors(cur);
            e = nb[0].edge == e ? nb[1].edge : nb[0].edge;
        }
        path.last = cur;
        paths.push_back(std::move(path));
    };

    for (Vertex v = 0; v < n; ++v) {
        if (core.degree(v) < 3)
            continue;
        for (const Incidence& inc : core.neighbors(v))
            if (!used[inc.edge])
                walk(v, inc.edge);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (core.degree(v) != 2)
            continue;
        auto nb = core.neighbors(v);
        if (!used[nb[0].edge])
            walk(v, nb[0].edge);
    }
    return paths;
}

bool is_acyclic(const SparseGraph& g)
{
    return g.num_edges() + connected_components(g).size() == g.num_vertices();
}

} // namespace phaselab
