#include "phaselab/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "phaselab/errors.hpp"

namespace phaselab {

namespace {

// Next non-empty line split into unsigned integers.
bool next_record(std::istream& in, std::vector<std::uint64_t>& fields, std::size_t& line_no)
{
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        fields.clear();
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            if (tok.find_first_not_of("0123456789") != std::string::npos)
                throw FormatError("line " + std::to_string(line_no) + ": not a non-negative integer: " + tok);
            try {
                fields.push_back(std::stoull(tok));
            } catch (const std::out_of_range&) {
                throw FormatError("line " + std::to_string(line_no) + ": integer out of range");
            }
        }
        return true;
    }
    return false;
}

void expect(bool ok, std::size_t line_no, const std::string& what)
{
    if (!ok)
        throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

void write_edge_list(std::ostream& out, const SparseGraph& g)
{
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const Edge& e : g.edges())
        out << std::min(e.u, e.v) << ' ' << std::max(e.u, e.v) << '\n';
}

namespace {

SparseGraph read_edge_list_body(std::istream& in, std::size_t& line_no)
{
    std::vector<std::uint64_t> f;
    expect(next_record(in, f, line_no), line_no, "missing header \"n m\"");
    expect(f.size() == 2, line_no, "header must be \"n m\"");
    const std::uint64_t n = f[0];
    const std::uint64_t m = f[1];
    expect(n <= 0xffffffffu, line_no, "vertex count too large");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 24)));
    std::vector<std::pair<Vertex, Vertex>> seen;
    for (std::uint64_t i = 0; i < m; ++i) {
        expect(next_record(in, f, line_no), line_no, "expected " + std::to_string(m) + " edges");
        expect(f.size() == 2, line_no, "edge line must be \"u v\"");
        expect(f[0] != f[1], line_no, "self-loop");
        expect(f[0] < f[1], line_no, "edge must be written as u < v");
        expect(f[1] < n, line_no, "vertex out of range");
        edges.push_back({static_cast<Vertex>(f[0]), static_cast<Vertex>(f[1])});
        seen.emplace_back(edges.back().u, edges.back().v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw FormatError("duplicate edge");
    return SparseGraph(static_cast<std::size_t>(n), std::move(edges));
}

} // namespace

SparseGraph read_edge_list(std::istream& in)
{
    std::size_t line_no = 0;
    SparseGraph g = read_edge_list_body(in, line_no);
    std::vector<std::uint64_t> f;
    expect(!next_record(in, f, line_no), line_no, "trailing data after edge list");
    return g;
}

void write_tournament(std::ostream& out, const Tournament& t)
{
    out << t.size() << ' ' << t.num_backedges() << '\n';
    for (const VertexPair& p : t.backedges())
        out << p.lo << ' ' << p.hi << '\n';
}

Tournament read_tournament(std::istream& in)
{
    std::size_t line_no = 0;
    std::vector<std::uint64_t> f;
    expect(next_record(in, f, line_no), line_no, "missing header \"n b\"");
    expect(f.size() == 2, line_no, "header must be \"n b\"");
    const std::uint64_t n = f[0];
    const std::uint64_t b = f[1];
    expect(n <= 0xffffffffu, line_no, "vertex count too large");
    std::vector<VertexPair> pairs;
    for (std::uint64_t i = 0; i < b; ++i) {
        expect(next_record(in, f, line_no), line_no, "expected " + std::to_string(b) + " backedges");
        expect(f.size() == 2, line_no, "backedge line must be \"i j\"");
        expect(f[0] >= 1 && f[1] <= n, line_no, "vertex out of range 1..n");
        expect(f[0] < f[1], line_no, "backedge must be written as i < j");
        pairs.push_back({static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[1])});
    }
    expect(!next_record(in, f, line_no), line_no, "trailing data after tournament");
    try {
        return Tournament(static_cast<std::uint32_t>(n), std::move(pairs));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

void write_expanded_core(std::ostream& out, const ExpandedCore& core)
{
    write_edge_list(out, core.graph);
    out << "kernel " << core.kernel.num_vertices << ' ' << core.kernel.num_edges() << '\n';
    for (std::size_t e = 0; e < core.kernel.num_edges(); ++e) {
        out << core.kernel.edges[e].u << ' ' << core.kernel.edges[e].v << ' ' << core.length[e];
        for (EdgeId id : core.path[e])
            out << ' ' << id;
        out << '\n';
    }
}

ExpandedCore read_expanded_core(std::istream& in)
{
    std::size_t line_no = 0;
    ExpandedCore core;
    core.graph = read_edge_list_body(in, line_no);

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            break;
    }
    std::istringstream head(line);
    std::string word;
    std::uint64_t nk = 0, ek = 0;
    expect(static_cast<bool>(head >> word >> nk >> ek) && word == "kernel", line_no,
           "expected \"kernel N E\" section");
    expect(nk <= core.graph.num_vertices(), line_no, "more kernel vertices than graph vertices");

    KernelMultigraph& k = core.kernel;
    k.num_vertices = static_cast<std::uint32_t>(nk);
    k.degree.assign(k.num_vertices, 0);
    k.origin.resize(k.num_vertices);
    for (std::uint32_t v = 0; v < k.num_vertices; ++v)
        k.origin[v] = v;
    std::vector<char> used(core.graph.num_edges(), 0);
    std::vector<std::uint64_t> f;
    for (std::uint64_t e = 0; e < ek; ++e) {
        expect(next_record(in, f, line_no), line_no, "expected " + std::to_string(ek) + " kernel edges");
        expect(f.size() >= 4, line_no, "kernel line must be \"u v length ids...\"");
        expect(f[0] < nk && f[1] < nk, line_no, "kernel vertex out of range");
        expect(f[2] >= 1 && f.size() == 3 + f[2], line_no, "path length does not match its edge ids");
        const auto u = static_cast<Vertex>(f[0]);
        const auto v = static_cast<Vertex>(f[1]);
        k.edges.push_back({u, v});
        ++k.degree[u];
        ++k.degree[v];
        core.length.push_back(static_cast<std::uint32_t>(f[2]));
        std::vector<EdgeId> ids;
        for (std::size_t i = 3; i < f.size(); ++i) {
            expect(f[i] < core.graph.num_edges() && !used[f[i]], line_no, "bad or repeated path edge id");
            used[f[i]] = 1;
            ids.push_back(static_cast<EdgeId>(f[i]));
        }
        // the path must walk from u to v
        Vertex at = u;
        for (EdgeId id : ids) {
            const Edge& ed = core.graph.edge(id);
            expect(ed.u == at || ed.v == at, line_no, "path edges are not contiguous");
            at = core.graph.other(id, at);
        }
        expect(at == v, line_no, "path does not end at the kernel endpoint");
        core.path.push_back(std::move(ids));
    }
    expect(!next_record(in, f, line_no), line_no, "trailing data after kernel section");
    return core;
}

nlohmann::json to_json(const CutResult& cut)
{
    std::string bits(cut.partition.size(), '0');
    for (std::size_t v = 0; v < bits.size(); ++v)
        if (cut.partition.label[v])
            bits[v] = '1';
    return {{"cut_size", cut.cut_size}, {"partition", bits}, {"deleted_edge_ids", cut.deleted}};
}

void write_witness(std::ostream& out, const HomWitness& w)
{
    for (std::size_t v = 0; v < w.position.size(); ++v)
        out << v << ' ' << w.position[v] << '\n';
}

SparseGraph load_edge_list(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path);
    return read_edge_list(in);
}

Tournament load_tournament(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path);
    return read_tournament(in);
}

} // namespace phaselab
