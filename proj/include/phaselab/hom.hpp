#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phaselab/graph.hpp"

namespace phaselab {

/// Edge-preserving map V(G) -> Z_q with q = 2*ell + 1.
struct HomWitness {
    std::uint32_t cycle_length = 0;
    std::vector<std::uint32_t> position;
};

struct HomGuard {
    std::size_t max_vertices = 60;
    std::size_t max_edges = 120;
};

/// Exact decision of G -> C_{2ell+1} by backtracking with arc-consistency
/// pruning over bitset domains. Variables go by decreasing degree, values
/// ascending; each component is solved on its own with its first variable
/// pinned to position 0. Throws GuardError beyond the guard and
/// std::invalid_argument for ell < 1.
std::optional<HomWitness> hom_to_odd_cycle(const SparseGraph& g, std::uint32_t ell, HomGuard guard = {});

/// Every edge lands on adjacent cycle positions.
bool is_valid_witness(const SparseGraph& g, const HomWitness& w);

/// True when dist_lower_bound * (2ell+1) > e(G), which rules out a
/// homomorphism to C_{2ell+1}. False only means "not certified".
bool no_hom_certificate(const SparseGraph& g, std::uint32_t ell, long long dist_lower_bound);

/// ceil(1 / (2 delta)) for delta in (0, 1).
std::uint32_t ell_epsilon(double delta);

} // namespace phaselab
