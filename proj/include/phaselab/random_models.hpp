#pragma once

#include <cstdint>

#include "phaselab/graph.hpp"
#include "phaselab/rng.hpp"
#include "phaselab/tournament.hpp"

namespace phaselab {

/// G(n, p) in expected O(n + m) time by geometric skipping over the pairs
/// (w, v), w < v, enumerated in order of v then w. Edge ids follow that order.
SparseGraph sample_gnp(std::uint32_t n, double p, RngSpec rng);

/// T(n, p): each pair i < j becomes the backedge j -> i with probability p.
Tournament sample_tournament(std::uint32_t n, double p, RngSpec rng);

} // namespace phaselab
