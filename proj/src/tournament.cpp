#include "phaselab/tournament.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "phaselab/errors.hpp"

namespace phaselab {

Tournament::Tournament(std::uint32_t n, std::vector<VertexPair> backedges)
    : n_(n), backedges_(std::move(backedges))
{
    std::sort(backedges_.begin(), backedges_.end());
    for (const VertexPair& p : backedges_) {
        if (p.lo < 1 || p.lo >= p.hi || p.hi > n_)
            throw std::invalid_argument("tournament: bad backedge " + std::to_string(p.lo) + " " +
                                        std::to_string(p.hi));
    }
    if (std::adjacent_find(backedges_.begin(), backedges_.end()) != backedges_.end())
        throw std::invalid_argument("tournament: duplicate backedge");

    below_off_.assign(n_ + 2, 0);
    above_off_.assign(n_ + 2, 0);
    for (const VertexPair& p : backedges_) {
        ++below_off_[p.hi + 1];
        ++above_off_[p.lo + 1];
    }
    for (std::uint32_t v = 1; v <= n_; ++v) {
        below_off_[v + 1] += below_off_[v];
        above_off_[v + 1] += above_off_[v];
    }
    below_.resize(backedges_.size());
    above_.resize(backedges_.size());
    std::vector<std::size_t> bf(below_off_), af(above_off_);
    for (const VertexPair& p : backedges_) { // sorted, so each list comes out sorted
        above_[af[p.lo]++] = p.hi;
    }
    std::vector<VertexPair> by_hi(backedges_);
    std::sort(by_hi.begin(), by_hi.end(), [](const VertexPair& a, const VertexPair& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    });
    for (const VertexPair& p : by_hi)
        below_[bf[p.hi]++] = p.lo;
}

bool Tournament::is_backedge(std::uint32_t i, std::uint32_t j) const
{
    if (i > j)
        std::swap(i, j);
    auto ab = back_above(i);
    return std::binary_search(ab.begin(), ab.end(), j);
}

std::span<const std::uint32_t> Tournament::back_below(std::uint32_t v) const
{
    return {below_.data() + below_off_[v], below_.data() + below_off_[v + 1]};
}

std::span<const std::uint32_t> Tournament::back_above(std::uint32_t v) const
{
    return {above_.data() + above_off_[v], above_.data() + above_off_[v + 1]};
}

Tournament Tournament::induced(std::vector<std::uint32_t> vertices) const
{
    std::sort(vertices.begin(), vertices.end());
    std::vector<VertexPair> back;
    for (std::uint32_t a = 0; a < vertices.size(); ++a)
        for (std::uint32_t b = a + 1; b < vertices.size(); ++b)
            if (is_backedge(vertices[a], vertices[b]))
                back.push_back({a + 1, b + 1});
    return Tournament(static_cast<std::uint32_t>(vertices.size()), std::move(back));
}

Tournament hero_h()
{
    return Tournament(7, {{1, 3}, {4, 6}, {1, 7}, {2, 7}, {3, 7}});
}

SparseGraph backedge_graph(const Tournament& t)
{
    std::vector<Edge> edges;
    edges.reserve(t.num_backedges());
    for (const VertexPair& p : t.backedges())
        edges.push_back({p.lo - 1, p.hi - 1});
    return SparseGraph(t.size(), std::move(edges));
}

bool is_transitive(const Tournament& t)
{
    const std::uint32_t n = t.size();
    std::vector<char> seen(n, 0);
    for (std::uint32_t v = 1; v <= n; ++v) {
        // forward arcs to larger vertices, minus those reversed, plus reversed arcs to smaller ones
        const std::size_t score = (n - v) - t.back_above(v).size() + t.back_below(v).size();
        if (score >= n || seen[score])
            return false;
        seen[score] = 1;
    }
    return true;
}

bool is_transitive(const Tournament& t, std::span<const std::uint32_t> vertices)
{
    const std::size_t k = vertices.size();
    std::vector<char> seen(k, 0);
    for (std::uint32_t a : vertices) {
        std::size_t score = 0;
        for (std::uint32_t b : vertices)
            if (a != b && t.arc(a, b))
                ++score;
        if (score >= k || seen[score])
            return false;
        seen[score] = 1;
    }
    return true;
}

namespace {

/// out[v] bit w set iff v -> w, 0-based, for n <= 32.
std::vector<std::uint32_t> out_masks(const Tournament& t)
{
    const std::uint32_t n = t.size();
    std::vector<std::uint32_t> out(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t w = v + 1; w < n; ++w) {
            if (t.is_backedge(v + 1, w + 1))
                out[w] |= 1u << v;
            else
                out[v] |= 1u << w;
        }
    return out;
}

struct ColoringSearch {
    const std::vector<std::uint32_t>& out;
    std::vector<std::uint32_t> in;
    std::uint32_t n;
    int k;
    std::vector<std::uint32_t> classes;
    std::vector<std::uint8_t> color;

    ColoringSearch(const std::vector<std::uint32_t>& out_, std::uint32_t n_, int k_)
        : out(out_), in(n_), n(n_), k(k_), classes(static_cast<std::size_t>(k_), 0), color(n_, 0)
    {
        const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
        for (std::uint32_t v = 0; v < n; ++v)
            in[v] = all & ~out[v] & ~(1u << v);
    }

    // A transitive class stays transitive after adding w iff no 3-cycle passes through w.
    bool fits(std::uint32_t w, std::uint32_t cls) const
    {
        std::uint32_t succ = out[w] & cls;
        const std::uint32_t pred = in[w] & cls;
        while (succ) {
            const int a = std::countr_zero(succ);
            succ &= succ - 1;
            if (out[static_cast<std::size_t>(a)] & pred)
                return false;
        }
        return true;
    }

    bool run(std::uint32_t v, int used)
    {
        if (v == n)
            return true;
        const int limit = std::min(k, used + 1);
        for (int c = 0; c < limit; ++c) {
            auto& cls = classes[static_cast<std::size_t>(c)];
            if (!fits(v, cls))
                continue;
            cls |= 1u << v;
            color[v] = static_cast<std::uint8_t>(c);
            if (run(v + 1, std::max(used, c + 1)))
                return true;
            cls &= ~(1u << v);
        }
        return false;
    }
};

std::optional<TournamentColoring> k_coloring(const Tournament& t, const std::vector<std::uint32_t>& out, int k)
{
    ColoringSearch search(out, t.size(), k);
    if (!search.run(0, 0))
        return std::nullopt;
    int used = 0;
    for (auto c : search.color)
        used = std::max(used, c + 1);
    return TournamentColoring{t.size() == 0 ? 0 : used, search.color};
}

} // namespace

std::optional<TournamentColoring> two_coloring_exact(const Tournament& t)
{
    if (t.size() > two_coloring_guard)
        throw GuardError("two_coloring_exact: n = " + std::to_string(t.size()) + " exceeds guard " +
                         std::to_string(two_coloring_guard));
    const auto out = out_masks(t);
    return k_coloring(t, out, 2);
}

TournamentColoring chromatic_number_exact(const Tournament& t)
{
    const std::uint32_t n = t.size();
    if (n > two_coloring_guard)
        throw GuardError("chromatic_number_exact: n = " + std::to_string(n) + " exceeds guard " +
                         std::to_string(two_coloring_guard));
    if (n == 0)
        return {};
    const auto out = out_masks(t);
    const int max_k = n <= chromatic_full_guard ? static_cast<int>(n) : 2;
    for (int k = 1; k <= max_k; ++k)
        if (auto c = k_coloring(t, out, k))
            return *c;
    throw GuardError("chromatic_number_exact: tournament on " + std::to_string(n) +
                     " vertices is not 2-colourable and exceeds the full-search guard " +
                     std::to_string(chromatic_full_guard));
}

namespace {

/// fas[S] over subsets of a local vertex list, placing the last vertex of
/// the order at each step.
std::vector<std::uint16_t> fas_table(const std::vector<std::uint32_t>& out, std::uint32_t n)
{
    std::vector<std::uint16_t> fas(std::size_t{1} << n, 0);
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
        std::uint16_t best = std::numeric_limits<std::uint16_t>::max();
        std::uint32_t rest = s;
        while (rest) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            const std::uint32_t without = s & ~(1u << v);
            const auto cost = static_cast<std::uint16_t>(fas[without] + std::popcount(out[static_cast<std::size_t>(v)] & without));
            best = std::min(best, cost);
        }
        fas[s] = best;
    }
    return fas;
}

} // namespace

std::size_t min_feedback_arc_set(const Tournament& t, std::span<const std::uint32_t> vertices)
{
    if (vertices.size() > 20)
        throw GuardError("min_feedback_arc_set: more than 20 vertices");
    const auto k = static_cast<std::uint32_t>(vertices.size());
    std::vector<std::uint32_t> out(k, 0);
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = 0; b < k; ++b)
            if (a != b && t.arc(vertices[a], vertices[b]))
                out[a] |= 1u << b;
    return k == 0 ? 0 : fas_table(out, k)[(1u << k) - 1];
}

std::size_t dist_tour_bp_exact(const Tournament& t)
{
    const std::uint32_t n = t.size();
    if (n > chromatic_full_guard)
        throw GuardError("dist_tour_bp_exact: n = " + std::to_string(n) + " exceeds guard " +
                         std::to_string(chromatic_full_guard));
    if (n <= 2)
        return 0;
    const auto out = out_masks(t);
    const auto fas = fas_table(out, n);
    const std::uint32_t all = (1u << n) - 1;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    // vertex 0 stays in the first class; the complement covers the mirror image
    for (std::uint32_t s = 1; s <= all; s += 2)
        best = std::min<std::size_t>(best, fas[s] + fas[all & ~s]);
    return best;
}

HeroSearch find_h_copy(const Tournament& t, std::uint64_t budget)
{
    HeroSearch result;
    const auto& bk = t.backedges();

    // Backedges ordered by lower endpoint, for the (u4, u6) scan.
    std::vector<VertexPair> by_lo(bk.begin(), bk.end());

    auto no_back_to = [&](std::uint32_t x, std::span<const std::uint32_t> others) {
        for (std::uint32_t y : others)
            if (y != x && t.is_backedge(std::min(x, y), std::max(x, y)))
                return false;
        return true;
    };

    for (std::uint32_t u7 = 7; u7 <= t.size(); ++u7) {
        auto low = t.back_below(u7);
        if (low.size() < 3)
            continue;
        for (std::size_t a = 0; a < low.size(); ++a) {
            for (std::size_t b = a + 1; b < low.size(); ++b) {
                for (std::size_t c = b + 1; c < low.size(); ++c) {
                    if (result.triples_scanned >= budget)
                        return result;
                    ++result.triples_scanned;
                    const std::uint32_t u1 = low[a], u2 = low[b], u3 = low[c];
                    if (!t.is_backedge(u1, u3) || t.is_backedge(u1, u2) || t.is_backedge(u2, u3))
                        continue;
                    auto it = std::upper_bound(by_lo.begin(), by_lo.end(), VertexPair{u3, std::numeric_limits<std::uint32_t>::max()});
                    for (; it != by_lo.end() && it->lo < u7; ++it) {
                        const std::uint32_t u4 = it->lo, u6 = it->hi;
                        if (u6 >= u7 || u6 - u4 < 2)
                            continue;
                        // Only the five backedges of H may appear among the seven.
                        const std::array<std::uint32_t, 6> six{u1, u2, u3, u4, u6, u7};
                        bool clean = true;
                        for (std::uint32_t x : {u4, u6}) {
                            for (std::uint32_t y : six) {
                                if (y == x || (x == u4 && y == u6) || (x == u6 && y == u4))
                                    continue;
                                if (t.is_backedge(std::min(x, y), std::max(x, y))) {
                                    clean = false;
                                    break;
                                }
                            }
                        }
                        if (!clean)
                            continue;
                        for (std::uint32_t u5 = u4 + 1; u5 < u6; ++u5) {
                            if (no_back_to(u5, six)) {
                                result.copy = std::array<std::uint32_t, 7>{u1, u2, u3, u4, u5, u6, u7};
                                return result;
                            }
                        }
                    }
                }
            }
        }
    }
    result.exhausted = true;
    return result;
}

std::vector<VertexPair> long_backedges(const Tournament& t, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("long_backedges: alpha must lie in (0, 1]");
    const double threshold = alpha * static_cast<double>(t.size());
    std::vector<VertexPair> out;
    for (const VertexPair& p : t.backedges())
        if (static_cast<double>(p.hi - p.lo) >= threshold)
            out.push_back(p);
    return out;
}

std::vector<int> misra_gries_edge_coloring(std::span<const LabelledEdge> edges, int* colors_used)
{
    // Dense relabelling.
    std::map<std::uint32_t, std::uint32_t> ids;
    for (const auto& e : edges) {
        ids.emplace(e.a, 0);
        ids.emplace(e.b, 0);
    }
    std::uint32_t next = 0;
    for (auto& [label, id] : ids)
        id = next++;
    const std::uint32_t n = next;
    std::vector<std::vector<std::uint32_t>> adj(n);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> local;
    for (const auto& e : edges) {
        const std::uint32_t a = ids[e.a], b = ids[e.b];
        if (a == b)
            throw std::invalid_argument("edge colouring: loop at " + std::to_string(e.a));
        adj[a].push_back(b);
        adj[b].push_back(a);
        local.emplace_back(a, b);
    }
    std::size_t delta = 0;
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
            throw std::invalid_argument("edge colouring: repeated edge");
        delta = std::max(delta, nb.size());
    }
    const int palette = static_cast<int>(delta) + 1;
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    // at[v * palette + c] = neighbour joined to v by colour c
    std::vector<std::uint32_t> at(static_cast<std::size_t>(n) * static_cast<std::size_t>(palette), none);
    auto slot = [&](std::uint32_t v, int c) -> std::uint32_t& {
        return at[static_cast<std::size_t>(v) * static_cast<std::size_t>(palette) + static_cast<std::size_t>(c)];
    };
    auto color_of = [&](std::uint32_t u, std::uint32_t v) {
        for (int c = 0; c < palette; ++c)
            if (slot(u, c) == v)
                return c;
        return -1;
    };
    auto is_free = [&](std::uint32_t v, int c) { return slot(v, c) == none; };
    auto free_color = [&](std::uint32_t v) {
        for (int c = 0; c < palette; ++c)
            if (is_free(v, c))
                return c;
        return -1;
    };
    auto set_color = [&](std::uint32_t u, std::uint32_t v, int c) {
        slot(u, c) = v;
        slot(v, c) = u;
    };
    auto clear_color = [&](std::uint32_t u, std::uint32_t v, int c) {
        slot(u, c) = none;
        slot(v, c) = none;
    };

    for (const auto& [u, v] : local) {
        // maximal fan of u starting at v
        std::vector<std::uint32_t> fan{v};
        std::vector<char> in_fan(n, 0);
        in_fan[v] = 1;
        for (bool grown = true; grown;) {
            grown = false;
            for (std::uint32_t x : adj[u]) {
                if (in_fan[x])
                    continue;
                const int cx = color_of(u, x);
                if (cx >= 0 && is_free(fan.back(), cx)) {
                    fan.push_back(x);
                    in_fan[x] = 1;
                    grown = true;
                    break;
                }
            }
        }
        const int c = free_color(u);
        const int d = free_color(fan.back());

        // invert the cd-path starting at u
        if (c != d) {
            std::vector<std::tuple<std::uint32_t, std::uint32_t, int>> path;
            std::uint32_t cur = u;
            int col = d;
            while (slot(cur, col) != none) {
                const std::uint32_t nxt = slot(cur, col);
                path.emplace_back(cur, nxt, col);
                cur = nxt;
                col = col == d ? c : d;
            }
            for (auto& [x, y, cc] : path)
                clear_color(x, y, cc);
            for (auto& [x, y, cc] : path)
                set_color(x, y, cc == d ? c : d);
        }

        // first fan vertex w with d free such that the prefix is still a fan
        std::size_t w = fan.size();
        for (std::size_t i = 0; i < fan.size(); ++i) {
            if (i > 0) {
                const int ci = color_of(u, fan[i]);
                if (ci < 0 || !is_free(fan[i - 1], ci))
                    break;
            }
            if (is_free(fan[i], d)) {
                w = i;
                break;
            }
        }
        if (w >= fan.size())
            throw std::logic_error("edge colouring: fan rotation failed");
        // rotate the prefix fan[0..w]
        for (std::size_t i = 0; i < w; ++i) {
            const int ci = color_of(u, fan[i + 1]);
            clear_color(u, fan[i + 1], ci);
            set_color(u, fan[i], ci);
        }
        set_color(u, fan[w], d);
    }

    std::vector<int> colors;
    colors.reserve(local.size());
    int used = 0;
    for (const auto& [a, b] : local) {
        const int cc = color_of(a, b);
        colors.push_back(cc);
        used = std::max(used, cc + 1);
    }
    if (colors_used)
        *colors_used = used;
    return colors;
}

std::vector<LabelledEdge> bounded_degree_matching(std::span<const LabelledEdge> edges, int d)
{
    if (d < 0)
        throw std::invalid_argument("bounded_degree_matching: negative degree bound");
    std::map<std::uint32_t, int> deg;
    for (const auto& e : edges) {
        if (++deg[e.a] > d || ++deg[e.b] > d)
            throw std::invalid_argument("bounded_degree_matching: a vertex meets more than " +
                                        std::to_string(d) + " edges");
    }
    if (edges.empty())
        return {};
    int used = 0;
    const auto colors = misra_gries_edge_coloring(edges, &used);
    std::vector<std::size_t> class_size(static_cast<std::size_t>(used), 0);
    for (int c : colors)
        ++class_size[static_cast<std::size_t>(c)];
    const auto best = static_cast<int>(std::max_element(class_size.begin(), class_size.end()) - class_size.begin());
    std::vector<LabelledEdge> matching;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (colors[i] == best)
            matching.push_back(edges[i]);
    return matching;
}

BlowupPreconditionError::BlowupPreconditionError(std::vector<std::string> violations)
    : std::invalid_argument([&] {
          std::string msg = "backedge_blowup_count preconditions violated:";
          for (const auto& v : violations)
              msg += "\n  " + v;
          return msg;
      }()),
      violations_(std::move(violations))
{
}

BlowupCount backedge_blowup_count(const Tournament& t, std::span<const VertexPair> matching, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("backedge_blowup_count: alpha must lie in (0, 1]");
    std::vector<std::string> violations;
    std::vector<std::uint32_t> endpoints;
    std::vector<char> touched(t.size() + 1, 0);
    const double threshold = alpha * static_cast<double>(t.size());
    for (std::size_t i = 0; i < matching.size(); ++i) {
        const VertexPair& e = matching[i];
        const std::string name = "edge " + std::to_string(i) + " (" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ")";
        if (e.lo < 1 || e.lo >= e.hi || e.hi > t.size()) {
            violations.push_back(name + ": not a pair lo < hi inside 1..n");
            continue;
        }
        if (!t.is_backedge(e.lo, e.hi))
            violations.push_back(name + ": not a backedge");
        if (static_cast<double>(e.hi - e.lo) < threshold)
            violations.push_back(name + ": not alpha-long");
        for (std::uint32_t x : {e.lo, e.hi}) {
            if (touched[x])
                violations.push_back(name + ": shares vertex " + std::to_string(x));
            touched[x] = 1;
            endpoints.push_back(x);
        }
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    if (violations.empty() && !is_transitive(t, endpoints))
        violations.push_back("matching endpoints do not induce a transitive subtournament");
    if (!violations.empty())
        throw BlowupPreconditionError(std::move(violations));

    BlowupCount out;
    const std::size_t m = matching.size();
    const auto at_least = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(m) - 1e-12));
    out.guaranteed = at_least * (at_least + 1) / 2;
    if (m == 0)
        return out;

    // straddle count for every k in 1..n by a difference array
    std::vector<long> diff(t.size() + 2, 0);
    for (const VertexPair& e : matching) {
        ++diff[e.lo];
        --diff[e.hi];
    }
    long running = 0, best = -1;
    for (std::uint32_t k = 1; k <= t.size(); ++k) {
        running += diff[k];
        if (running > best) {
            best = running;
            out.threshold = k;
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (matching[i].lo <= out.threshold && out.threshold < matching[i].hi)
            out.selected.push_back(i);
    out.crossing = out.selected.size();
    for (std::size_t a : out.selected)
        for (std::size_t b : out.selected)
            if (t.is_backedge(matching[b].lo, matching[a].hi))
                ++out.backedges;
    if (out.backedges < out.guaranteed)
        throw std::logic_error("backedge_blowup_count: count below the guaranteed bound");
    return out;
}

} // namespace phaselab
