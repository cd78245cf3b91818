#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "phaselab/dlp.hpp"
#include "phaselab/graph.hpp"

namespace phaselab {

/// A bipartition and the edges it cuts. Algorithmic variants also list the
/// deleted edges; then cut_size == e(G) - deleted.size(), G minus the deleted
/// edges is properly 2-coloured by `partition`, and cut_size counts crossing
/// edges of that remainder (a deleted edge may still happen to cross).
struct CutResult {
    std::size_t cut_size = 0;
    VertexPartition partition;
    std::vector<EdgeId> deleted;
};

inline constexpr std::size_t exact_cut_guard = 30;
inline constexpr std::size_t bad_edge_guard = 24;

/// Maximum cut by Gray-code enumeration of the 2^(n-1) bipartitions with
/// vertex 0 on side 0, O(1) popcount update per step. Among optimal
/// partitions the lexicographically least label vector is returned.
/// Throws GuardError when n > guard (the guard itself is capped at 32).
CutResult exact_maxcut(const SparseGraph& g, std::size_t guard = exact_cut_guard);

/// e(G) - MAXCUT(G) under the same guard.
std::size_t dist_bp_exact(const SparseGraph& g, std::size_t guard = exact_cut_guard);

/// Exact Dist_BP summed over the components of the 2-core, which is all that
/// contributes; the guard applies to each core component separately.
std::size_t dist_bp_exact_by_core(const SparseGraph& g, std::size_t guard = exact_cut_guard);

/// Component-wise bipartization following the upper-bound proof:
/// non-largest components lose the edges that clash with a BFS 2-colouring
/// (one per odd cycle of a unicyclic component), and the largest component
/// loses the representative edge of every kernel path of its 2-core, which
/// leaves it acyclic.
CutResult giant_cut_algorithm(const SparseGraph& g);

/// One representative edge per odd-length kernel path; removing them leaves
/// the expanded core bipartite. Throws std::invalid_argument without path data.
std::vector<EdgeId> odd_path_bipartization(const ExpandedCore& core);
/// Same construction on an arbitrary graph of minimum degree >= 2 using its
/// own kernel paths.
std::vector<EdgeId> odd_path_bipartization(const SparseGraph& core);

/// Minimum over kernel bipartitions of the number of bad edges (odd inside a
/// side, or even across), a lower bound on Dist_BP of the expansion.
/// parities[e] is true when l_e is odd. Throws GuardError above 24 vertices.
std::size_t min_bad_edges(const KernelMultigraph& kernel, const std::vector<bool>& parities);

struct DistBound {
    std::size_t value = 0;
    bool exact = true;
};

/// Valid lower bound on Dist_BP(G), summed over 2-core components: exact
/// when a component has at most exact_guard vertices, else min_bad_edges on
/// its contracted kernel when that has at most 24 vertices, else 0.
DistBound dist_bp_lower_bound(const SparseGraph& g, std::size_t exact_guard = exact_cut_guard);

/// Kernel of a graph of minimum degree >= 2 with the parity of each
/// suppressed path. Bare cycle components are skipped.
std::pair<KernelMultigraph, std::vector<bool>> contract_kernel(const SparseGraph& core);

struct Sandwich {
    std::size_t lower = 0;
    std::optional<std::size_t> exact;
    std::size_t upper = 0;
};

/// min_bad_edges <= dist_bp_exact <= |odd_path_bipartization|; the exact
/// middle term is computed when v(core) <= exact_guard. Throws
/// std::logic_error if an inequality fails.
Sandwich sandwich_check(const ExpandedCore& core, std::size_t exact_guard = exact_cut_guard);

} // namespace phaselab
