#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phaselab/graph.hpp"

namespace phaselab {

/// Pair (i, j) with i < j in 1-based tournament numbering; as a backedge it
/// means the arc j -> i.
struct VertexPair {
    std::uint32_t lo;
    std::uint32_t hi;
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// Tournament on 1..n stored as its set of backedges; every absent pair
/// i < j is the forward arc i -> j.
class Tournament {
public:
    Tournament() = default;
    /// Throws std::invalid_argument on pairs with lo >= hi, out-of-range
    /// vertices or duplicates.
    Tournament(std::uint32_t n, std::vector<VertexPair> backedges);

    std::uint32_t size() const { return n_; }
    std::span<const VertexPair> backedges() const { return backedges_; }
    std::size_t num_backedges() const { return backedges_.size(); }

    bool is_backedge(std::uint32_t i, std::uint32_t j) const;
    /// True when the arc between distinct a and b points a -> b.
    bool arc(std::uint32_t a, std::uint32_t b) const
    {
        return a < b ? !is_backedge(a, b) : is_backedge(b, a);
    }
    /// Endpoints of backedges at v that are smaller than v (v -> w arcs).
    std::span<const std::uint32_t> back_below(std::uint32_t v) const;
    /// Endpoints of backedges at v that are larger than v (w -> v arcs).
    std::span<const std::uint32_t> back_above(std::uint32_t v) const;
    std::size_t backedge_degree(std::uint32_t v) const
    {
        return back_below(v).size() + back_above(v).size();
    }

    /// Subtournament induced by the given vertices, relabelled 1..k in
    /// increasing order of the originals.
    Tournament induced(std::vector<std::uint32_t> vertices) const;

private:
    std::uint32_t n_ = 0;
    std::vector<VertexPair> backedges_; // sorted
    std::vector<std::size_t> below_off_, above_off_;
    std::vector<std::uint32_t> below_, above_;
};

/// Colour per vertex (index v-1 holds the colour of vertex v), 0..k-1.
struct TournamentColoring {
    int colors = 0;
    std::vector<std::uint8_t> color;
};

/// The fixed 7-vertex tournament with 1->2->3->1, 4->5->6->4 and
/// {1,2,3} -> {4,5,6} -> 7 -> {1,2,3}.
Tournament hero_h();

/// Undirected backedge graph; tournament vertex i becomes graph vertex i-1.
SparseGraph backedge_graph(const Tournament& t);

/// Transitivity via the score sequence (a tournament is transitive iff its
/// out-degrees are exactly 0..n-1).
bool is_transitive(const Tournament& t);
bool is_transitive(const Tournament& t, std::span<const std::uint32_t> vertices);

inline constexpr std::uint32_t chromatic_full_guard = 14;
inline constexpr std::uint32_t two_coloring_guard = 24;

/// Lexicographically least proper 2-colouring, or nullopt. n <= 24.
std::optional<TournamentColoring> two_coloring_exact(const Tournament& t);

/// Minimal k and the lexicographically least k-colouring. Exact for n <= 14;
/// for 15 <= n <= 24 it answers only when chi <= 2 and throws GuardError
/// otherwise.
TournamentColoring chromatic_number_exact(const Tournament& t);

/// Minimum arc reversals that make t 2-colourable. n <= 14.
std::size_t dist_tour_bp_exact(const Tournament& t);

/// Minimum feedback arc set of the subtournament on `vertices` by subset DP
/// over linear orders. At most 20 vertices.
std::size_t min_feedback_arc_set(const Tournament& t, std::span<const std::uint32_t> vertices);

struct HeroSearch {
    std::optional<std::array<std::uint32_t, 7>> copy;
    std::uint64_t triples_scanned = 0;
    bool exhausted = false; // true when the whole search space was covered
};

inline constexpr std::uint64_t default_hero_budget = 10'000'000;

/// Looks for an ordered copy u1 < ... < u7 of hero_h(). Candidates are seeded
/// by backedge triples below a common top vertex u7. A miss with
/// exhausted == false proves nothing.
HeroSearch find_h_copy(const Tournament& t, std::uint64_t budget = default_hero_budget);

/// Backedges with hi - lo >= alpha * n.
std::vector<VertexPair> long_backedges(const Tournament& t, double alpha);

/// Edge set on arbitrary vertex labels for the matching extraction.
struct LabelledEdge {
    std::uint32_t a;
    std::uint32_t b;
    friend bool operator==(const LabelledEdge&, const LabelledEdge&) = default;
};

/// Proper edge colouring of a simple graph with at most max_degree + 1
/// colours (Misra-Gries). Returns colour per input edge.
std::vector<int> misra_gries_edge_coloring(std::span<const LabelledEdge> edges, int* colors_used = nullptr);

/// Largest colour class of a (d+1)-edge-colouring of F, hence a matching of
/// size >= |F| / (d+1). Throws std::invalid_argument when some vertex meets
/// more than d edges, or F has loops or repeated edges.
std::vector<LabelledEdge> bounded_degree_matching(std::span<const LabelledEdge> edges, int d);

class BlowupPreconditionError : public std::invalid_argument {
public:
    explicit BlowupPreconditionError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct BlowupCount {
    std::uint32_t threshold = 0;     // the k attaining the largest F
    std::size_t crossing = 0;        // r = |F|
    std::size_t backedges = 0;       // distinct backedges v_a -> u_b with a, b in F
    std::size_t guaranteed = 0;      // binom(ceil(alpha t) + 1, 2)
    std::vector<std::size_t> selected; // indices into the input matching forming F
};

/// Counts the backedges forced by a matching of alpha-long backedges whose
/// endpoints induce a transitive subtournament: picks the threshold k with
/// the most matching edges straddling it and counts the backedges from their
/// upper endpoints to their lower endpoints.
BlowupCount backedge_blowup_count(const Tournament& t, std::span<const VertexPair> matching, double alpha);

} // namespace phaselab
