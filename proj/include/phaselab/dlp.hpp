#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phaselab/graph.hpp"
#include "phaselab/rng.hpp"

namespace phaselab {

/// Parameters of the contiguous core model: lambda = 1 + eps and the dual
/// root mu < 1 with mu e^-mu = lambda e^-lambda.
struct DlpParams {
    double lambda = 0;
    double mu = 0;
    std::uint32_t n = 0;

    double epsilon() const { return lambda - 1.0; }
};

/// Root in (0, 1) of x e^-x = lambda e^-lambda by bisection on
/// [1e-15, 1 - 1e-15] to absolute tolerance 1e-12. Throws for lambda <= 1.
double solve_mu(double lambda);

DlpParams make_dlp_params(std::uint32_t n, double epsilon);

struct DegreeProfile {
    double Lambda = 0;                // realized Gaussian mean parameter
    std::vector<std::uint32_t> degree; // D_u, u = 0..n-1
    std::vector<std::uint64_t> count;  // count[k] = N_k
    std::uint64_t kernel_vertices = 0; // N = sum_{k>=3} N_k
    std::uint64_t truncated_sum = 0;   // sum of D_u over D_u >= 3
    std::uint32_t attempts = 0;
};

inline constexpr std::uint32_t max_parity_attempts = 1'000'000;

/// Lambda ~ N(lambda - mu, 1/n), then D_u iid Poisson(Lambda) resampled as a
/// whole vector (Lambda held fixed) until the truncated sum is even. A
/// non-positive Lambda yields all-zero degrees.
DegreeProfile sample_degree_profile(std::uint32_t n, double lambda, double mu, Rng& rng);

/// Multigraph with loops; a loop adds 2 to its vertex's degree.
struct KernelMultigraph {
    std::uint32_t num_vertices = 0;
    std::vector<Edge> edges;          // loops allowed (u == v), parallel edges allowed
    std::vector<std::uint32_t> degree;
    std::vector<std::uint32_t> origin; // profile index u of each kernel vertex

    std::size_t num_edges() const { return edges.size(); }
};

/// Configuration-model pairing of the stubs of all degree >= 3 vertices.
/// Throws std::invalid_argument when the stub total is odd.
KernelMultigraph sample_kernel(const DegreeProfile& profile, Rng& rng);
/// Same pairing for an explicit degree sequence (entries below 3 allowed).
KernelMultigraph pair_stubs(std::span<const std::uint32_t> degrees, Rng& rng);

/// The kernel with each edge replaced by a path.
struct ExpandedCore {
    SparseGraph graph;                         // kernel vertices are 0..N-1
    KernelMultigraph kernel;
    std::vector<std::uint32_t> length;         // l_e per kernel edge
    std::vector<std::vector<EdgeId>> path;     // P_e, ordered from kernel edge's u to v
    /// Path data present and consistent with the kernel.
    bool has_metadata() const
    {
        return path.size() == kernel.edges.size() && length.size() == path.size() &&
               (graph.num_edges() == 0 || !path.empty());
    }
};

/// Replaces kernel edge e by a path of Geom(1 - mu) length with l_e - 1 new
/// internal vertices. Loops are conditioned on l >= 3 and every further copy
/// of a parallel edge on l >= 2 whenever an earlier copy already used the
/// direct edge, so the result is a simple graph.
ExpandedCore expand_paths(const KernelMultigraph& kernel, double mu, Rng& rng);
/// Expansion with caller-chosen lengths; throws if the result would not be simple.
ExpandedCore expand_with_lengths(const KernelMultigraph& kernel, std::span<const std::uint32_t> lengths);

struct DlpSample {
    DlpParams params;
    DegreeProfile profile;
    ExpandedCore core;
};

/// Full pipeline for eps in (0, 1). The profile keeps only summary data
/// (degree vector dropped) unless keep_degrees is set.
DlpSample sample_dlp_core(std::uint32_t n, double epsilon, RngSpec spec, bool keep_degrees = false);

/// Exact E[e(K)] / n for a given Lambda: E[D 1{D >= 3}] / 2 for D ~ Poisson(Lambda).
double expected_kernel_density(double Lambda);

} // namespace phaselab
