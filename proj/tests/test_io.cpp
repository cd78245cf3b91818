#include <doctest.h>

#include <sstream>

#include "phaselab/dlp.hpp"
#include "phaselab/errors.hpp"
#include "phaselab/io.hpp"
#include "phaselab/random_models.hpp"
#include "support.hpp"

using namespace phaselab;

namespace {

SparseGraph parse_graph(const std::string& s)
{
    std::istringstream in(s);
    return read_edge_list(in);
}

Tournament parse_tournament(const std::string& s)
{
    std::istringstream in(s);
    return read_tournament(in);
}

} // namespace

TEST_CASE("edge list round trip")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SparseGraph g = sample_gnp(50, 0.05, RngSpec{500, s});
        std::ostringstream out;
        write_edge_list(out, g);
        const SparseGraph h = parse_graph(out.str());
        REQUIRE(h.num_vertices() == g.num_vertices());
        REQUIRE(h.num_edges() == g.num_edges());
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
            CHECK(std::min(g.edge(e).u, g.edge(e).v) == h.edge(e).u);
            CHECK(std::max(g.edge(e).u, g.edge(e).v) == h.edge(e).v);
        }
        std::ostringstream again;
        write_edge_list(again, h);
        CHECK(again.str() == out.str());
    }
    const SparseGraph g = parse_graph("\n3 2\n0 1\n\n1 2\n");
    CHECK(g.num_edges() == 2);
}

TEST_CASE("edge list rejections")
{
    CHECK_THROWS_AS(parse_graph(""), FormatError);
    CHECK_THROWS_AS(parse_graph("3"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n1 1\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n2 1\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n0 3\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 2\n0 1\n0 1\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 2\n0 1\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n0 1\n1 2\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n0 -1\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n0 1 2\n"), FormatError);
    CHECK_THROWS_AS(parse_graph("3 1\n0 x\n"), FormatError);
}

TEST_CASE("tournament round trip and rejections")
{
    const Tournament t = sample_tournament(30, 0.2, RngSpec{501, 0});
    std::ostringstream out;
    write_tournament(out, t);
    const Tournament u = parse_tournament(out.str());
    CHECK(u.size() == 30);
    CHECK(std::equal(t.backedges().begin(), t.backedges().end(), u.backedges().begin(), u.backedges().end()));

    CHECK(parse_tournament("7 5\n1 3\n1 7\n2 7\n3 7\n4 6\n").num_backedges() == 5);
    CHECK_THROWS_AS(parse_tournament("3 1\n0 2\n"), FormatError);
    CHECK_THROWS_AS(parse_tournament("3 1\n1 4\n"), FormatError);
    CHECK_THROWS_AS(parse_tournament("3 1\n2 1\n"), FormatError);
    CHECK_THROWS_AS(parse_tournament("3 2\n1 2\n1 2\n"), FormatError);
    CHECK_THROWS_AS(parse_tournament("3 1\n1 2\n9 9\n"), FormatError);
}

TEST_CASE("expanded core round trip")
{
    const DlpSample s = sample_dlp_core(20000, 0.4, RngSpec{502, 0});
    std::ostringstream out;
    write_expanded_core(out, s.core);
    std::istringstream in(out.str());
    const ExpandedCore c = read_expanded_core(in);
    CHECK(c.graph.num_edges() == s.core.graph.num_edges());
    CHECK(c.kernel.num_edges() == s.core.kernel.num_edges());
    CHECK(c.length == s.core.length);
    CHECK(c.path == s.core.path);

    // a path whose edges do not walk between the endpoints
    std::istringstream bad("3 3\n0 1\n1 2\n0 2\nkernel 2 1\n0 1 2 0 1\n");
    CHECK_THROWS_AS(read_expanded_core(bad), FormatError);
    std::istringstream ok("3 3\n0 1\n1 2\n0 2\nkernel 1 1\n0 0 3 0 1 2\n");
    CHECK(read_expanded_core(ok).length.front() == 3);
    std::istringstream missing("2 1\n0 1\n");
    CHECK_THROWS_AS(read_expanded_core(missing), FormatError);
}

TEST_CASE("cut json and witness output")
{
    CutResult c;
    c.cut_size = 2;
    c.partition.label = {0, 1, 0};
    c.deleted = {4};
    const auto j = to_json(c);
    CHECK(j.at("cut_size") == 2);
    CHECK(j.at("partition") == "010");
    CHECK(j.at("deleted_edge_ids") == nlohmann::json::array({4}));

    std::ostringstream out;
    write_witness(out, HomWitness{3, {0, 1, 2}});
    CHECK(out.str() == "0 0\n1 1\n2 2\n");
    CHECK_THROWS_AS(load_edge_list("/nonexistent/file"), FormatError);
}
