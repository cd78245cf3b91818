// phaselab command-line front end.
//
// Exit codes: 0 success, 2 bad config or input, 3 guard rejection,
// 130 interrupted experiment (completed trials are flushed).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "phaselab/cut.hpp"
#include "phaselab/dlp.hpp"
#include "phaselab/errors.hpp"
#include "phaselab/harness.hpp"
#include "phaselab/hom.hpp"
#include "phaselab/io.hpp"
#include "phaselab/random_models.hpp"
#include "phaselab/tournament.hpp"

using namespace phaselab;
using nlohmann::json;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;
    std::string config;
    json conf = json::object();
};

// CLI value when given, else the config file's field, else the fallback.
template <typename T>
T pick(const CLI::Option* opt, const T& cli_value, const json& conf, const char* key, const T& fallback)
{
    if (opt && opt->count() > 0)
        return cli_value;
    if (conf.contains(key)) {
        try {
            return conf.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config field \"") + key + "\": " + e.what());
        }
    }
    return fallback;
}

// Writes to --out, or stdout when unset.
void emit(const Globals& g, const std::string& text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
    if (!f)
        throw ConfigError("cannot write " + g.out);
    f << text;
}

json tournament_coloring_json(const TournamentColoring& c)
{
    return {{"k", c.colors}, {"color", std::vector<int>(c.color.begin(), c.color.end())}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse random graphs and biased tournaments near p = (1+eps)/n"};
    app.require_subcommand(1);
    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    auto* workers_opt = app.add_option("--workers", g.workers, "worker threads")->capture_default_str();
    auto* out_opt = app.add_option("--out", g.out, "output path (stdout when omitted)");
    app.add_option("--config", g.config, "JSON config; CLI flags take precedence")->check(CLI::ExistingFile);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a G(n,p) graph, a biased tournament or a core-model sample");
    std::string model = "gnp";
    std::uint32_t gen_n = 1000;
    double gen_eps = 0.1, gen_p = -1;
    auto* model_opt = gen->add_option("--model", model, "gnp | tournament | dlp")
                          ->check(CLI::IsMember({"gnp", "tournament", "dlp"}));
    auto* gen_n_opt = gen->add_option("--n", gen_n, "vertex count");
    auto* gen_eps_opt = gen->add_option("--eps", gen_eps, "p = (1+eps)/n unless --p is given");
    auto* gen_p_opt = gen->add_option("--p", gen_p, "edge / reversal probability");

    // maxcut
    auto* maxcut = app.add_subcommand("maxcut", "exact or algorithmic cut of an edge-list graph");
    std::string mc_input, mc_method = "exact";
    std::size_t mc_guard = exact_cut_guard;
    auto* mc_input_opt = maxcut->add_option("--input", mc_input, "edge list (expanded core for oddpath/sandwich)");
    auto* mc_method_opt = maxcut->add_option("--method", mc_method, "exact | giant | oddpath | sandwich")
                              ->check(CLI::IsMember({"exact", "giant", "oddpath", "sandwich"}));
    auto* mc_guard_opt = maxcut->add_option("--guard", mc_guard, "largest n for exact enumeration (max 32)");

    // dlp-sample
    auto* dlp = app.add_subcommand("dlp-sample", "sample the contiguous core model");
    std::uint32_t dlp_n = 1000;
    double dlp_eps = 0.1;
    auto* dlp_n_opt = dlp->add_option("--n", dlp_n, "vertex count of the degree profile");
    auto* dlp_eps_opt = dlp->add_option("--eps", dlp_eps, "epsilon in (0, 1)");

    // hom
    auto* hom = app.add_subcommand("hom", "decide a homomorphism to C_{2l+1}");
    std::string hom_input;
    std::uint32_t hom_ell = 1;
    long long hom_bound = -1;
    HomGuard hom_guard;
    auto* hom_input_opt = hom->add_option("--input", hom_input, "edge list");
    auto* hom_ell_opt = hom->add_option("--ell", hom_ell, "target cycle C_{2 ell + 1}");
    auto* hom_bound_opt = hom->add_option("--bound", hom_bound, "Dist_BP lower bound; also report the certificate");
    auto* hom_v_opt = hom->add_option("--max-vertices", hom_guard.max_vertices, "guard");
    auto* hom_e_opt = hom->add_option("--max-edges", hom_guard.max_edges, "guard");

    // tournament
    auto* tour = app.add_subcommand("tournament", "exact tournament colouring and H-copy search");
    std::string t_input, t_op = "chromatic";
    std::uint64_t t_budget = default_hero_budget;
    auto* t_input_opt = tour->add_option("--input", t_input, "tournament file");
    auto* t_op_opt = tour->add_option("--op", t_op, "chromatic | two | dist | hero | backedges")
                         ->check(CLI::IsMember({"chromatic", "two", "dist", "hero", "backedges"}));
    auto* t_budget_opt = tour->add_option("--budget", t_budget, "H-copy search budget (triples)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment described by --config");
    bool resume = false;
    exp->add_flag("--resume", resume, "continue an interrupted run from its cursor");

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "per-cell means and standard errors of a run CSV");
    std::string agg_input;
    agg->add_option("--input", agg_input, "run CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!g.config.empty()) {
            std::ifstream in(g.config);
            try {
                in >> g.conf;
            } catch (const json::exception& e) {
                throw ConfigError("config " + g.config + ": " + e.what());
            }
            if (!g.conf.is_object())
                throw ConfigError("config must be a JSON object");
        }
        g.seed = pick(seed_opt, g.seed, g.conf, "seed", std::uint64_t{1});
        g.workers = pick(workers_opt, g.workers, g.conf, "workers", 1u);
        g.out = pick(out_opt, g.out, g.conf, "out", std::string());
        if (g.workers < 1)
            throw ConfigError("--workers must be at least 1");

        if (*gen) {
            model = pick(model_opt, model, g.conf, "model", std::string("gnp"));
            gen_n = pick(gen_n_opt, gen_n, g.conf, "n", 1000u);
            gen_eps = pick(gen_eps_opt, gen_eps, g.conf, "eps", 0.1);
            gen_p = pick(gen_p_opt, gen_p, g.conf, "p", -1.0);
            const double p = gen_p >= 0 ? gen_p : (1.0 + gen_eps) / gen_n;
            const RngSpec spec{g.seed, 0};
            std::ostringstream ss;
            if (model == "gnp")
                write_edge_list(ss, sample_gnp(gen_n, p, spec));
            else if (model == "tournament")
                write_tournament(ss, sample_tournament(gen_n, p, spec));
            else if (model == "dlp")
                write_expanded_core(ss, sample_dlp_core(gen_n, gen_eps, spec).core);
            else
                throw ConfigError("unknown model " + model);
            emit(g, ss.str());
        } else if (*maxcut) {
            mc_input = pick(mc_input_opt, mc_input, g.conf, "input", std::string());
            mc_method = pick(mc_method_opt, mc_method, g.conf, "method", std::string("exact"));
            mc_guard = pick(mc_guard_opt, mc_guard, g.conf, "guard", exact_cut_guard);
            if (mc_input.empty())
                throw ConfigError("maxcut needs --input");
            json out;
            if (mc_method == "exact" || mc_method == "giant") {
                const SparseGraph graph = load_edge_list(mc_input);
                out = to_json(mc_method == "exact" ? exact_maxcut(graph, mc_guard) : giant_cut_algorithm(graph));
            } else {
                std::ifstream in(mc_input);
                if (!in)
                    throw FormatError("cannot open " + mc_input);
                const ExpandedCore core = read_expanded_core(in);
                if (mc_method == "oddpath") {
                    CutResult r;
                    r.deleted = odd_path_bipartization(core);
                    auto part = is_bipartite(core.graph.without_edges(r.deleted));
                    if (!part)
                        throw std::logic_error("odd-path deletion left an odd cycle");
                    r.partition = *part;
                    r.cut_size = core.graph.num_edges() - r.deleted.size();
                    out = to_json(r);
                } else {
                    const Sandwich s = sandwich_check(core, mc_guard);
                    out = {{"lower", s.lower}, {"exact", s.exact ? json(*s.exact) : json(nullptr)}, {"upper", s.upper}};
                }
            }
            emit(g, out.dump() + "\n");
        } else if (*dlp) {
            dlp_n = pick(dlp_n_opt, dlp_n, g.conf, "n", 1000u);
            dlp_eps = pick(dlp_eps_opt, dlp_eps, g.conf, "eps", 0.1);
            const DlpSample s = sample_dlp_core(dlp_n, dlp_eps, RngSpec{g.seed, 0});
            std::ostringstream ss;
            write_expanded_core(ss, s.core);
            emit(g, ss.str());
            const json summary = {{"n", dlp_n},
                                  {"eps", dlp_eps},
                                  {"mu", s.params.mu},
                                  {"Lambda", s.profile.Lambda},
                                  {"attempts", s.profile.attempts},
                                  {"kernel_vertices", s.core.kernel.num_vertices},
                                  {"kernel_edges", s.core.kernel.num_edges()},
                                  {"core_vertices", s.core.graph.num_vertices()},
                                  {"core_edges", s.core.graph.num_edges()}};
            (g.out.empty() ? std::cerr : std::cout) << summary.dump() << '\n';
        } else if (*hom) {
            hom_input = pick(hom_input_opt, hom_input, g.conf, "input", std::string());
            hom_ell = pick(hom_ell_opt, hom_ell, g.conf, "ell", 1u);
            hom_bound = pick(hom_bound_opt, hom_bound, g.conf, "bound", -1LL);
            hom_guard.max_vertices = pick(hom_v_opt, hom_guard.max_vertices, g.conf, "max_vertices", std::size_t{60});
            hom_guard.max_edges = pick(hom_e_opt, hom_guard.max_edges, g.conf, "max_edges", std::size_t{120});
            if (hom_input.empty())
                throw ConfigError("hom needs --input");
            const SparseGraph graph = load_edge_list(hom_input);
            if (hom_bound >= 0)
                std::cerr << "certificate (bound " << hom_bound << "): "
                          << (no_hom_certificate(graph, hom_ell, hom_bound) ? "no homomorphism" : "not certified")
                          << '\n';
            const auto w = hom_to_odd_cycle(graph, hom_ell, hom_guard);
            std::ostringstream ss;
            if (w)
                write_witness(ss, *w);
            else
                ss << "none\n";
            emit(g, ss.str());
        } else if (*tour) {
            t_input = pick(t_input_opt, t_input, g.conf, "input", std::string());
            t_op = pick(t_op_opt, t_op, g.conf, "op", std::string("chromatic"));
            t_budget = pick(t_budget_opt, t_budget, g.conf, "budget", default_hero_budget);
            if (t_input.empty())
                throw ConfigError("tournament needs --input");
            const Tournament t = load_tournament(t_input);
            json out = {{"n", t.size()}, {"backedges", t.num_backedges()}};
            if (t_op == "chromatic") {
                out["coloring"] = tournament_coloring_json(chromatic_number_exact(t));
            } else if (t_op == "two") {
                const auto c = two_coloring_exact(t);
                out["two_colorable"] = c.has_value();
                if (c)
                    out["coloring"] = tournament_coloring_json(*c);
            } else if (t_op == "dist") {
                out["dist_tour_bp"] = dist_tour_bp_exact(t);
            } else if (t_op == "hero") {
                const HeroSearch h = find_h_copy(t, t_budget);
                out["found"] = h.copy.has_value();
                if (h.copy)
                    out["copy"] = *h.copy;
                out["exhausted"] = h.exhausted;
                out["triples_scanned"] = h.triples_scanned;
            } else {
                out["bipartite_backedge_graph"] = is_bipartite(backedge_graph(t)).has_value();
            }
            emit(g, out.dump() + "\n");
        } else if (*exp) {
            if (g.config.empty())
                throw ConfigError("experiment needs --config");
            ExperimentConfig cfg = parse_config(g.conf);
            cfg.seed = g.seed;
            cfg.workers = g.workers;
            cfg.out = g.out;
            install_interrupt_handler();
            RunOptions opt;
            opt.resume = resume;
            const ExperimentResult r = run_experiment(cfg, opt);
            std::cout << r.summary.dump(2) << '\n';
            if (r.interrupted) {
                std::cerr << "interrupted: " << r.records.size() << " trials flushed, rerun with --resume\n";
                return 130;
            }
        } else if (*agg) {
            std::ifstream in(agg_input, std::ios::binary);
            if (!in)
                throw FormatError("cannot open " + agg_input);
            std::ostringstream ss;
            ss << in.rdbuf();
            emit(g, aggregate_csv(ss.str()));
        }
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "input: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
