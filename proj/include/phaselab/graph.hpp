#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace phaselab {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
    Vertex neighbor;
    EdgeId edge;
};

/// Undirected simple graph on vertices 0..n-1 with CSR adjacency.
///
/// Edge ids are positions in the insertion sequence. Adjacency lists are
/// sorted by neighbor index, so every traversal below is deterministic.
/// Construction rejects self-loops, duplicate edges and out-of-range
/// endpoints with std::invalid_argument.
class SparseGraph {
public:
    SparseGraph() = default;
    SparseGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const Edge> edges() const { return edges_; }

    std::span<const Incidence> neighbors(Vertex v) const
    {
        return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t min_degree() const;

    /// Endpoint of e opposite to v.
    Vertex other(EdgeId e, Vertex v) const
    {
        const Edge& ed = edges_[e];
        return ed.u == v ? ed.v : ed.u;
    }

    /// Copy of the graph without the given edges; surviving edges keep
    /// their relative order (ids are renumbered densely).
    SparseGraph without_edges(std::span<const EdgeId> removed) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_ = {0};
    std::vector<Incidence> incidences_;
};

/// Block label per vertex; k = 2 for bipartitions.
struct VertexPartition {
    std::vector<std::uint8_t> label;
    int blocks = 2;

    std::size_t size() const { return label.size(); }
    /// Number of edges of g whose endpoints lie in different blocks.
    std::size_t cut_size(const SparseGraph& g) const;
};

/// A maximal chain of degree-2 vertices between two branch vertices of a
/// core, or a bare cycle (first == last).
struct KernelPath {
    Vertex first;
    Vertex last;
    std::vector<EdgeId> edges; // traversal order starting at `first`

    std::size_t length() const { return edges.size(); }
    bool is_cycle() const { return first == last; }
    /// Edge removed when the path is cut: the final edge of the traversal.
    EdgeId representative() const { return edges.back(); }
};

/// Induced subgraph together with the maps back into its host.
struct InducedSubgraph {
    SparseGraph graph;
    std::vector<Vertex> to_host_vertex;
    std::vector<EdgeId> to_host_edge;
};

/// Components largest first; ties broken by smallest contained vertex.
/// Each component's vertices are listed in increasing order.
std::vector<std::vector<Vertex>> connected_components(const SparseGraph& g);

/// Subgraph induced by `vertices` (any order; duplicates are an error).
InducedSubgraph induced_subgraph(const SparseGraph& g, std::span<const Vertex> vertices);

/// Maximal induced subgraph of minimum degree >= 2 (leaf stripping).
InducedSubgraph two_core(const SparseGraph& g);

/// Proper 2-colouring by BFS layering, or nullopt when g has an odd cycle.
std::optional<VertexPartition> is_bipartite(const SparseGraph& g);

/// Length of the shortest odd cycle; nullopt for bipartite graphs. O(n*m).
std::optional<std::size_t> odd_girth(const SparseGraph& g);

/// Decomposes a graph of minimum degree >= 2 into kernel paths.
///
/// Branch vertices (degree >= 3) are visited in increasing order and each
/// unvisited incident edge is followed through degree-2 vertices, so every
/// path starts at its lower endpoint. Components that are bare cycles break
/// at their lowest vertex. Throws std::invalid_argument on a vertex of
/// degree 0 or 1.
std::vector<KernelPath> kernel_paths(const SparseGraph& core);

bool is_acyclic(const SparseGraph& g);

} // namespace phaselab
