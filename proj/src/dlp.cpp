#include "phaselab/dlp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace phaselab {

double solve_mu(double lambda)
{
    if (!(lambda > 1.0) || !std::isfinite(lambda))
        throw std::invalid_argument("solve_mu: lambda must exceed 1");
    const double target = lambda * std::exp(-lambda);
    double lo = 1e-15, hi = 1.0 - 1e-15;
    // x e^-x is increasing on (0, 1)
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(-mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

DlpParams make_dlp_params(std::uint32_t n, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (n == 0)
        throw std::invalid_argument("n must be at least 1");
    const double lambda = 1.0 + epsilon;
    return {lambda, solve_mu(lambda), n};
}

DegreeProfile sample_degree_profile(std::uint32_t n, double lambda, double mu, Rng& rng)
{
    if (n == 0)
        throw std::invalid_argument("sample_degree_profile: n must be at least 1");
    if (!(lambda > 1.0) || !(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("sample_degree_profile: need lambda > 1 and mu in (0, 1)");

    DegreeProfile profile;
    profile.Lambda = (lambda - mu) + rng.normal() / std::sqrt(static_cast<double>(n));
    profile.degree.resize(n);
    for (;;) {
        if (profile.attempts == max_parity_attempts)
            throw std::runtime_error("sample_degree_profile: no even truncated sum after " +
                                     std::to_string(max_parity_attempts) + " attempts");
        ++profile.attempts;
        std::uint64_t sum = 0;
        for (auto& d : profile.degree) {
            d = rng.poisson(profile.Lambda);
            if (d >= 3)
                sum += d;
        }
        if (sum % 2 == 0) {
            profile.truncated_sum = sum;
            break;
        }
    }
    const auto top = profile.degree.empty() ? 0u : *std::max_element(profile.degree.begin(), profile.degree.end());
    profile.count.assign(top + 1, 0);
    for (auto d : profile.degree)
        ++profile.count[d];
    for (std::size_t k = 3; k < profile.count.size(); ++k)
        profile.kernel_vertices += profile.count[k];
    return profile;
}

KernelMultigraph pair_stubs(std::span<const std::uint32_t> degrees, Rng& rng)
{
    KernelMultigraph k;
    k.num_vertices = static_cast<std::uint32_t>(degrees.size());
    k.degree.assign(degrees.begin(), degrees.end());
    k.origin.resize(degrees.size());
    std::vector<Vertex> stubs;
    for (Vertex v = 0; v < degrees.size(); ++v) {
        k.origin[v] = v;
        stubs.insert(stubs.end(), degrees[v], v);
    }
    if (stubs.size() % 2 != 0)
        throw std::invalid_argument("pair_stubs: odd number of stubs");
    rng.shuffle(std::span<Vertex>(stubs));
    k.edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i < stubs.size(); i += 2)
        k.edges.push_back({stubs[i], stubs[i + 1]});
    return k;
}

KernelMultigraph sample_kernel(const DegreeProfile& profile, Rng& rng)
{
    std::vector<std::uint32_t> degrees;
    std::vector<std::uint32_t> origin;
    for (std::uint32_t u = 0; u < profile.degree.size(); ++u) {
        if (profile.degree[u] >= 3) {
            degrees.push_back(profile.degree[u]);
            origin.push_back(u);
        }
    }
    KernelMultigraph k = pair_stubs(degrees, rng);
    k.origin = std::move(origin);
    return k;
}

namespace {

std::uint64_t pair_key(Vertex a, Vertex b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Smallest admissible length for kernel edge e given earlier direct edges.
std::uint32_t min_length(const Edge& e, const std::set<std::uint64_t>& direct)
{
    if (e.u == e.v)
        return 3;
    return direct.count(pair_key(e.u, e.v)) ? 2 : 1;
}

ExpandedCore build(const KernelMultigraph& kernel, std::vector<std::uint32_t> lengths)
{
    ExpandedCore core;
    core.kernel = kernel;
    std::size_t total_internal = 0;
    for (auto l : lengths) {
        if (l == 0)
            throw std::invalid_argument("expand: path length must be at least 1");
        total_internal += l - 1;
    }
    std::vector<Edge> edges;
    edges.reserve(total_internal + lengths.size());
    Vertex next = kernel.num_vertices;
    core.path.resize(kernel.edges.size());
    for (std::size_t e = 0; e < kernel.edges.size(); ++e) {
        Vertex prev = kernel.edges[e].u;
        for (std::uint32_t step = 0; step < lengths[e]; ++step) {
            const Vertex to = step + 1 == lengths[e] ? kernel.edges[e].v : next++;
            core.path[e].push_back(static_cast<EdgeId>(edges.size()));
            edges.push_back({prev, to});
            prev = to;
        }
    }
    core.graph = SparseGraph(next, std::move(edges));
    core.length = std::move(lengths);
    return core;
}

} // namespace

ExpandedCore expand_paths(const KernelMultigraph& kernel, double mu, Rng& rng)
{
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("expand_paths: mu must lie in (0, 1)");
    std::vector<std::uint32_t> lengths(kernel.edges.size());
    std::set<std::uint64_t> direct;
    for (std::size_t e = 0; e < kernel.edges.size(); ++e) {
        const Edge& ed = kernel.edges[e];
        const std::uint32_t floor_len = min_length(ed, direct);
        // Geom conditioned on l >= m is m - 1 + Geom by memorylessness.
        lengths[e] = static_cast<std::uint32_t>(floor_len - 1 + rng.geometric(mu));
        if (lengths[e] == 1)
            direct.insert(pair_key(ed.u, ed.v));
    }
    return build(kernel, std::move(lengths));
}

ExpandedCore expand_with_lengths(const KernelMultigraph& kernel, std::span<const std::uint32_t> lengths)
{
    if (lengths.size() != kernel.edges.size())
        throw std::invalid_argument("expand_with_lengths: one length per kernel edge required");
    std::set<std::uint64_t> direct;
    for (std::size_t e = 0; e < kernel.edges.size(); ++e) {
        if (lengths[e] < min_length(kernel.edges[e], direct))
            throw std::invalid_argument("expand_with_lengths: kernel edge " + std::to_string(e) +
                                        " would create a loop or multi-edge");
        if (lengths[e] == 1)
            direct.insert(pair_key(kernel.edges[e].u, kernel.edges[e].v));
    }
    return build(kernel, {lengths.begin(), lengths.end()});
}

DlpSample sample_dlp_core(std::uint32_t n, double epsilon, RngSpec spec, bool keep_degrees)
{
    DlpSample s;
    s.params = make_dlp_params(n, epsilon);
    Rng profile_rng(spec.substream(1));
    s.profile = sample_degree_profile(n, s.params.lambda, s.params.mu, profile_rng);
    Rng kernel_rng(spec.substream(2));
    const KernelMultigraph kernel = sample_kernel(s.profile, kernel_rng);
    Rng path_rng(spec.substream(3));
    s.core = expand_paths(kernel, s.params.mu, path_rng);
    if (!keep_degrees) {
        s.profile.degree.clear();
        s.profile.degree.shrink_to_fit();
    }
    return s;
}

double expected_kernel_density(double Lambda)
{
    if (!(Lambda > 0.0))
        return 0.0;
    const double p = std::exp(-Lambda);
    return 0.5 * (Lambda - Lambda * p - Lambda * Lambda * p);
}

} // namespace phaselab
