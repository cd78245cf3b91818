#include "phaselab/hom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "phaselab/errors.hpp"

namespace phaselab {

namespace {

using Domain = std::uint64_t;

class CycleCsp {
public:
    CycleCsp(const SparseGraph& g, std::uint32_t q, std::span<const Vertex> component)
        : g_(g), q_(q), full_(q == 64 ? ~Domain{0} : (Domain{1} << q) - 1), local_(g.num_vertices(), npos)
    {
        order_.assign(component.begin(), component.end());
        std::stable_sort(order_.begin(), order_.end(),
                         [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
        for (std::size_t i = 0; i < order_.size(); ++i)
            local_[order_[i]] = static_cast<std::uint32_t>(i);
    }

    // Fills position[] for the component on success.
    bool solve(std::vector<std::uint32_t>& position)
    {
        std::vector<Domain> dom(order_.size(), full_);
        dom[0] = 1; // rotations of the cycle are symmetric
        if (!propagate(dom))
            return false;
        if (!search(0, dom))
            return false;
        for (std::size_t i = 0; i < order_.size(); ++i)
            position[order_[i]] = static_cast<std::uint32_t>(std::countr_zero(dom[i]));
        return true;
    }

private:
    static constexpr std::uint32_t npos = 0xffffffffu;

    // positions adjacent to some position in d
    Domain shift(Domain d) const
    {
        const Domain up = ((d << 1) | (d >> (q_ - 1))) & full_;
        const Domain down = ((d >> 1) | (d << (q_ - 1))) & full_;
        return up | down;
    }

    bool propagate(std::vector<Domain>& dom) const
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < order_.size(); ++i) {
                Domain allowed = dom[i];
                for (const Incidence& inc : g_.neighbors(order_[i]))
                    allowed &= shift(dom[local_[inc.neighbor]]);
                if (allowed == 0)
                    return false;
                if (allowed != dom[i]) {
                    dom[i] = allowed;
                    changed = true;
                }
            }
        }
        return true;
    }

    bool search(std::size_t depth, std::vector<Domain>& dom)
    {
        while (depth < order_.size() && std::popcount(dom[depth]) == 1)
            ++depth;
        if (depth == order_.size())
            return true;
        for (Domain rest = dom[depth]; rest != 0; rest &= rest - 1) {
            std::vector<Domain> trial = dom;
            trial[depth] = rest & (~rest + 1);
            if (propagate(trial) && search(depth + 1, trial)) {
                dom = std::move(trial);
                return true;
            }
        }
        return false;
    }

    const SparseGraph& g_;
    std::uint32_t q_;
    Domain full_;
    std::vector<Vertex> order_;
    std::vector<std::uint32_t> local_;
};

} // namespace

std::optional<HomWitness> hom_to_odd_cycle(const SparseGraph& g, std::uint32_t ell, HomGuard guard)
{
    if (ell < 1)
        throw std::invalid_argument("hom_to_odd_cycle: ell must be at least 1");
    if (g.num_vertices() > guard.max_vertices || g.num_edges() > guard.max_edges)
        throw GuardError("hom_to_odd_cycle: graph with " + std::to_string(g.num_vertices()) + " vertices and " +
                         std::to_string(g.num_edges()) + " edges exceeds the guard");

    HomWitness w;
    w.cycle_length = 2 * ell + 1;
    w.position.assign(g.num_vertices(), 0);

    if (w.cycle_length > 63) {
        // An odd cycle of G has length <= v(G), so a long target admits
        // only bipartite graphs: everything onto the edge {0, 1}.
        if (w.cycle_length <= g.num_vertices())
            throw GuardError("hom_to_odd_cycle: cycle length above 63 on a graph this large");
        auto part = is_bipartite(g);
        if (!part)
            return std::nullopt;
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            w.position[v] = part->label[v];
        return w;
    }

    for (const auto& comp : connected_components(g)) {
        if (comp.size() == 1)
            continue;
        CycleCsp csp(g, w.cycle_length, comp);
        if (!csp.solve(w.position))
            return std::nullopt;
    }
    return w;
}

bool is_valid_witness(const SparseGraph& g, const HomWitness& w)
{
    if (w.cycle_length < 3 || w.cycle_length % 2 == 0 || w.position.size() != g.num_vertices())
        return false;
    for (std::uint32_t p : w.position)
        if (p >= w.cycle_length)
            return false;
    for (const Edge& e : g.edges()) {
        const std::uint32_t d = (w.position[e.u] + w.cycle_length - w.position[e.v]) % w.cycle_length;
        if (d != 1 && d != w.cycle_length - 1)
            return false;
    }
    return true;
}

bool no_hom_certificate(const SparseGraph& g, std::uint32_t ell, long long dist_lower_bound)
{
    if (dist_lower_bound < 0)
        throw std::invalid_argument("no_hom_certificate: negative distance bound");
    if (ell < 1)
        throw std::invalid_argument("no_hom_certificate: ell must be at least 1");
    const auto q = 2 * static_cast<unsigned long long>(ell) + 1;
    return static_cast<unsigned long long>(dist_lower_bound) * q > g.num_edges();
}

std::uint32_t ell_epsilon(double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ell_epsilon: delta must lie in (0, 1)");
    auto ell = static_cast<std::uint32_t>(std::ceil(1.0 / (2.0 * delta)));
    // guard against rounding in 1/(2 delta)
    while (1.0 / (2.0 * ell + 1.0) >= delta)
        ++ell;
    return std::max<std::uint32_t>(ell, 1);
}

} // namespace phaselab
