#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "phaselab/cut.hpp"
#include "phaselab/dlp.hpp"

using namespace phaselab;

namespace {

// E[D 1{D >= 3}] / 2 for D ~ Poisson(L), summed term by term.
double poisson_tail_mean(double L)
{
    double term = std::exp(-L), total = 0;
    for (int k = 0; k < 200; ++k) {
        if (k >= 3)
            total += k * term;
        term *= L / (k + 1);
    }
    return total / 2;
}

bool simple_or_loop_free(const KernelMultigraph& k, std::size_t e)
{
    const Edge& ed = k.edges[e];
    if (ed.u == ed.v)
        return false;
    for (std::size_t f = 0; f < k.edges.size(); ++f)
        if (f != e && std::minmax(k.edges[f].u, k.edges[f].v) == std::minmax(ed.u, ed.v))
            return false;
    return true;
}

} // namespace

TEST_CASE("dual root")
{
    const double mu11 = solve_mu(1.1);
    CHECK(mu11 > 0.9);
    CHECK(mu11 < 0.90667);
    CHECK(std::abs(solve_mu(1.5) - 0.6257825342012826) < 1e-12);
    CHECK(std::abs(solve_mu(1.0 + 1e-6) - 1.0) < 1e-2);
    for (double lambda : {1.01, 1.3, 2.0, 4.0}) {
        const double mu = solve_mu(lambda);
        CHECK(std::abs(mu * std::exp(-mu) - lambda * std::exp(-lambda)) < 1e-13);
        CHECK(mu < 1.0);
    }
    CHECK_THROWS(solve_mu(1.0));
    CHECK_THROWS(solve_mu(0.5));
    CHECK_THROWS(make_dlp_params(100, 0.0));
    CHECK_THROWS(make_dlp_params(100, 1.0));
}

TEST_CASE("dual root bracket over the epsilon grid")
{
    for (int i = 1; i <= 50; ++i) {
        const double eps = i / 100.0;
        const double mu = solve_mu(1 + eps);
        CAPTURE(eps);
        CHECK(mu > 1 - eps);
        CHECK(mu < 1 - eps + 2.0 / 3.0 * eps * eps);
    }
}

TEST_CASE("degree profile: Lambda and parity")
{
    const DlpParams par = make_dlp_params(100000, 0.2);
    double lam = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        Rng rng(RngSpec{21, static_cast<std::uint64_t>(t)});
        const DegreeProfile p = sample_degree_profile(par.n, par.lambda, par.mu, rng);
        lam += p.Lambda;
        CHECK(p.truncated_sum % 2 == 0);
        std::uint64_t s = 0, n3 = 0;
        for (auto d : p.degree)
            if (d >= 3) {
                s += d;
                ++n3;
            }
        CHECK(s == p.truncated_sum);
        CHECK(n3 == p.kernel_vertices);
    }
    const double sd = 1.0 / std::sqrt(100000.0 * trials);
    CHECK(std::abs(lam / trials - (par.lambda - par.mu)) <= 3 * sd);

    double attempts = 0;
    for (int t = 0; t < 1000; ++t) {
        Rng rng(RngSpec{22, static_cast<std::uint64_t>(t)});
        attempts += sample_degree_profile(10000, par.lambda, par.mu, rng).attempts;
    }
    // Geom(1/2) attempts: mean 2, so 2.2 is above 4 standard errors
    CHECK(attempts / 1000 <= 2.2);

    for (int t = 0; t < 50; ++t) {
        Rng rng(RngSpec{23, static_cast<std::uint64_t>(t)});
        const DegreeProfile p = sample_degree_profile(1, 2.0, solve_mu(2.0), rng);
        CHECK((p.degree[0] < 3 || p.degree[0] % 2 == 0));
    }
}

TEST_CASE("stub pairing")
{
    Rng rng(RngSpec{3, 0});
    for (int t = 0; t < 100; ++t) {
        const std::vector<std::uint32_t> deg = {3, 3};
        const KernelMultigraph k = pair_stubs(deg, rng);
        CHECK(k.num_edges() == 3);
        std::vector<std::uint32_t> d(2, 0);
        for (const Edge& e : k.edges) {
            ++d[e.u];
            ++d[e.v];
        }
        CHECK(d == deg);
    }
    CHECK(pair_stubs(std::vector<std::uint32_t>{}, rng).num_edges() == 0);
    CHECK_THROWS(pair_stubs(std::vector<std::uint32_t>{3}, rng));

    DegreeProfile empty;
    empty.degree = {0, 1, 2, 2};
    CHECK(sample_kernel(empty, rng).num_vertices == 0);
}

TEST_CASE("kernel density matches the exact Poisson tail")
{
    for (double L : {0.1, 0.5, 0.87, 2.0})
        CHECK(expected_kernel_density(L) == doctest::Approx(poisson_tail_mean(L)).epsilon(1e-12));
    CHECK(expected_kernel_density(0.0) == 0.0);

    const double eps = 0.3;
    const DlpParams par = make_dlp_params(200000, eps);
    double density = 0;
    for (int t = 0; t < 10; ++t) {
        Rng rng(RngSpec{31, static_cast<std::uint64_t>(t)});
        const DegreeProfile p = sample_degree_profile(par.n, par.lambda, par.mu, rng);
        density += static_cast<double>(p.truncated_sum) / 2 / par.n;
    }
    const double oracle = expected_kernel_density(par.lambda - par.mu);
    CHECK(std::abs(density / 10 - oracle) / oracle <= 0.30);
}

TEST_CASE("path expansion")
{
    // all lengths 1 on a simple kernel reproduces the kernel
    KernelMultigraph k4;
    k4.num_vertices = 4;
    k4.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    k4.degree = {3, 3, 3, 3};
    const std::vector<std::uint32_t> ones(6, 1);
    const ExpandedCore same = expand_with_lengths(k4, ones);
    CHECK(same.graph.num_vertices() == 4);
    CHECK(std::equal(same.graph.edges().begin(), same.graph.edges().end(), k4.edges.begin()));

    KernelMultigraph loop;
    loop.num_vertices = 1;
    loop.edges = {{0, 0}};
    loop.degree = {2};
    CHECK_THROWS(expand_with_lengths(loop, std::vector<std::uint32_t>{1}));
    CHECK_THROWS(expand_with_lengths(loop, std::vector<std::uint32_t>{2}));
    CHECK(expand_with_lengths(loop, std::vector<std::uint32_t>{3}).graph.num_edges() == 3);

    KernelMultigraph multi;
    multi.num_vertices = 2;
    multi.edges = {{0, 1}, {0, 1}, {1, 0}};
    multi.degree = {3, 3};
    CHECK_THROWS(expand_with_lengths(multi, std::vector<std::uint32_t>{1, 1, 2}));
    CHECK_NOTHROW(expand_with_lengths(multi, std::vector<std::uint32_t>{1, 2, 2}));

    // length statistics on the edges that need no conditioning
    for (double mu : {0.9, 0.5}) {
        Rng rng(RngSpec{41, static_cast<std::uint64_t>(mu * 100)});
        const std::vector<std::uint32_t> deg(6000, 3);
        double sum = 0, odd = 0, draws = 0;
        while (draws < 10000) {
            const KernelMultigraph k = pair_stubs(deg, rng);
            const ExpandedCore core = expand_paths(k, mu, rng);
            for (std::size_t e = 0; e < k.num_edges(); ++e) {
                if (!simple_or_loop_free(k, e))
                    continue;
                sum += core.length[e];
                odd += core.length[e] % 2;
                ++draws;
            }
        }
        const double sd_len = std::sqrt(mu) / (1 - mu);
        CHECK(std::abs(sum / draws - 1 / (1 - mu)) <= 3 * sd_len / std::sqrt(draws));
        const double p_odd = 1 / (1 + mu);
        CHECK(std::abs(odd / draws - p_odd) <= 3 * std::sqrt(p_odd * (1 - p_odd) / draws));
    }
}

TEST_CASE("core model samples")
{
    int good = 0;
    for (int t = 0; t < 100; ++t) {
        const DlpSample s = sample_dlp_core(1000000, 0.1, RngSpec{51, static_cast<std::uint64_t>(t)});
        if (s.core.graph.num_vertices() > 0 && s.core.graph.min_degree() >= 2)
            ++good;
    }
    CHECK(good >= 99);

    for (int t = 0; t < 30; ++t) {
        const DlpSample s = sample_dlp_core(20000, 0.3, RngSpec{52, static_cast<std::uint64_t>(t)});
        const ExpandedCore& c = s.core;
        REQUIRE(c.has_metadata());
        // subdivision keeps e - v
        CHECK(static_cast<long>(c.graph.num_edges()) - static_cast<long>(c.graph.num_vertices()) ==
              static_cast<long>(c.kernel.num_edges()) - static_cast<long>(c.kernel.num_vertices));
        // contracting degree-2 chains gives back the kernel degree sequence
        const auto [k, parity] = contract_kernel(c.graph);
        std::vector<std::uint32_t> a = k.degree, b = c.kernel.degree;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(k.num_edges() == c.kernel.num_edges());
        std::size_t odd = 0;
        for (auto l : c.length)
            odd += l % 2;
        CHECK(static_cast<std::size_t>(std::count(parity.begin(), parity.end(), true)) == odd);
    }
}
