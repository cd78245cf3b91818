#include <doctest.h>

#include <cmath>

#include "phaselab/cut.hpp"
#include "phaselab/errors.hpp"
#include "phaselab/hom.hpp"
#include "phaselab/random_models.hpp"
#include "support.hpp"

using namespace phaselab;
using testing::cycle;

namespace {

// Tries every map V -> Z_q.
bool brute_hom(const SparseGraph& g, std::uint32_t q)
{
    const std::size_t n = g.num_vertices();
    std::vector<std::uint32_t> pos(n, 0);
    for (;;) {
        bool ok = true;
        for (const Edge& e : g.edges()) {
            const std::uint32_t d = (pos[e.u] + q - pos[e.v]) % q;
            if (d != 1 && d != q - 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            return true;
        std::size_t i = 0;
        while (i < n && ++pos[i] == q)
            pos[i++] = 0;
        if (i == n)
            return false;
    }
}

} // namespace

TEST_CASE("odd cycles")
{
    const auto w = hom_to_odd_cycle(cycle(3), 1);
    REQUIRE(w);
    CHECK(w->cycle_length == 3);
    CHECK(is_valid_witness(cycle(3), *w));
    CHECK_FALSE(hom_to_odd_cycle(cycle(3), 2));
    const auto w7 = hom_to_odd_cycle(cycle(7), 2);
    REQUIRE(w7);
    CHECK(is_valid_witness(cycle(7), *w7));
    CHECK(hom_to_odd_cycle(cycle(7), 3));
    CHECK_FALSE(hom_to_odd_cycle(cycle(7), 4));
    // bipartite graphs map everywhere, including long targets
    CHECK(hom_to_odd_cycle(cycle(8), 40));
    CHECK_FALSE(hom_to_odd_cycle(cycle(9), 40));
    CHECK(hom_to_odd_cycle(SparseGraph(5, {}), 3));
}

TEST_CASE("argument and guard errors")
{
    CHECK_THROWS_AS(hom_to_odd_cycle(cycle(3), 0), std::invalid_argument);
    CHECK_THROWS_AS(hom_to_odd_cycle(cycle(61), 1), GuardError);
    CHECK_THROWS_AS(hom_to_odd_cycle(testing::complete(17), 1), GuardError); // 136 edges
    CHECK(hom_to_odd_cycle(cycle(61), 1, HomGuard{61, 120}).has_value());
}

TEST_CASE("certificate and ell_epsilon arithmetic")
{
    CHECK(no_hom_certificate(cycle(3), 2, 1));
    CHECK_FALSE(no_hom_certificate(cycle(3), 1, 1)); // 1 * 3 > 3 fails
    for (std::uint32_t ell = 1; ell < 30; ++ell)
        CHECK_FALSE(no_hom_certificate(testing::petersen(), ell, 0));
    CHECK_THROWS(no_hom_certificate(cycle(3), 2, -1));

    CHECK(ell_epsilon(0.25) == 2);
    CHECK(ell_epsilon(0.5) == 1);
    CHECK(ell_epsilon(0.01) == 50);
    CHECK(ell_epsilon(0.2) == 3);
    for (double d = 0.003; d < 1; d += 0.0137) {
        const auto l = ell_epsilon(d);
        CHECK(l == static_cast<std::uint32_t>(std::ceil(1 / (2 * d))));
        for (std::uint32_t k = l; k < l + 50; ++k)
            CHECK(1.0 / (2 * k + 1) < d);
    }
    CHECK_THROWS(ell_epsilon(0.0));
    CHECK_THROWS(ell_epsilon(1.0));
}

TEST_CASE("exact decision matches exhaustive maps")
{
    Rng rng(RngSpec{300, 0});
    for (int t = 0; t < 120; ++t) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(5));
        const SparseGraph g = testing::random_graph(n, 0.5, rng);
        for (std::uint32_t ell = 1; ell <= 3; ++ell)
            CHECK(hom_to_odd_cycle(g, ell).has_value() == brute_hom(g, 2 * ell + 1));
    }
}

TEST_CASE("downward closure, witness validity and odd girth")
{
    Rng rng(RngSpec{301, 0});
    for (int t = 0; t < 1000; ++t) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(12));
        const SparseGraph g = testing::random_graph(n, 2.5 / n + 0.1 * rng.uniform(), rng);
        const auto girth = odd_girth(g);
        bool previous = true;
        for (std::uint32_t ell = 1; ell <= 7; ++ell) {
            const auto w = hom_to_odd_cycle(g, ell);
            if (w)
                CHECK(is_valid_witness(g, *w));
            // a witness at ell implies one at every smaller ell
            CHECK((!w || previous));
            previous = w.has_value();
            if (girth && ell > (*girth - 1) / 2)
                CHECK_FALSE(w);
        }
    }
}

TEST_CASE("certificates are sound")
{
    int fired = 0;
    for (std::uint64_t t = 0; t < 400; ++t) {
        const std::uint32_t n = 10 + static_cast<std::uint32_t>(t % 21);
        const SparseGraph g = sample_gnp(n, 2.2 / n, RngSpec{302, t});
        const std::size_t bound = dist_bp_exact(g);
        for (std::uint32_t ell = 1; ell <= 20; ++ell) {
            if (!no_hom_certificate(g, ell, static_cast<long long>(bound)))
                continue;
            ++fired;
            CHECK_FALSE(hom_to_odd_cycle(g, ell));
        }
    }
    CHECK(fired > 100);
}
