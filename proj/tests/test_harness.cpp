#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phaselab/errors.hpp"
#include "phaselab/harness.hpp"

using namespace phaselab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "phaselab_harness_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    fs::remove(p.string() + ".cursor");
    fs::remove(p.string() + ".timing.csv");
    return p;
}

ExperimentConfig small_scaling()
{
    return parse_config(json{{"experiment", "maxcut_scaling"}, {"grid", {0.3, 0.5}}, {"n", {300, 600}},
                             {"trials", 3}, {"seed", 77}});
}

} // namespace

TEST_CASE("config validation")
{
    CHECK_NOTHROW(small_scaling());
    CHECK_THROWS_AS(parse_config(json{{"experiment", "nope"}, {"grid", {0.1}}, {"n", {10}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", {0.1}}, {"n", {10}}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", json::array()}, {"n", {10}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", {1.5}}, {"n", {10}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", {0.2}}, {"n", {10}}, {"trials", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", {0.2}}, {"n", "ten"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "tournament"}, {"grid", {0.2}}, {"n", {10}}, {"mode", "x"}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "tournament"},
                                      {"grid", {0.2}},
                                      {"n", {20}},
                                      {"mode", "kscan"}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "hom"}, {"grid", {0.2}}, {"n", {10}}, {"ell_min", 3}, {"ell_max", 2}}),
                    ConfigError);
    // c-rules accept constants outside (0, 1)
    CHECK_NOTHROW(parse_config(
        json{{"experiment", "tournament"}, {"grid", {2.0}}, {"n", {10}}, {"mode", "band"}, {"p_rule", "c"}}));
    const auto c = parse_config(json{{"experiment", "hom"}, {"epsilon", {0.2}}, {"n", {10}}, {"tolerances", {{"a", 1}}}});
    CHECK(c.grid == std::vector<double>{0.2});
    CHECK(c.tolerance("a") == 1);
    CHECK_THROWS_AS(c.tolerance("b"), ConfigError);
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(3) == "3");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("replays are byte identical and independent of the worker count")
{
    auto cfg = small_scaling();
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    cfg.out = a.string();
    const auto ra = run_experiment(cfg);
    cfg.out = b.string();
    cfg.workers = 3;
    const auto rb = run_experiment(cfg);
    CHECK(slurp(a) == slurp(b));
    CHECK(ra.summary == rb.summary);
    CHECK(fs::exists(a.string() + ".timing.csv"));
    CHECK_FALSE(fs::exists(a.string() + ".cursor"));

    REQUIRE(ra.records.size() == 12);
    for (std::size_t i = 0; i < ra.records.size(); ++i)
        CHECK(ra.records[i].stream == i);
    CHECK(ra.records[0].param == 0.3);
    CHECK(ra.records[0].n == 300);
    CHECK(ra.records[3].n == 600);
    CHECK(ra.records[6].param == 0.5);

    std::istringstream lines(slurp(a));
    std::string head;
    std::getline(lines, head);
    CHECK(head.rfind("experiment,n,param,stream,", 0) == 0);
    CHECK(head.find("seconds") == std::string::npos);
}

TEST_CASE("seed changes the draws")
{
    auto cfg = small_scaling();
    const auto r1 = run_experiment(cfg);
    cfg.seed = 78;
    const auto r2 = run_experiment(cfg);
    CHECK(csv_row(r1.records[0]) != csv_row(r2.records[0]));
}

TEST_CASE("resume continues from the cursor")
{
    auto cfg = small_scaling();
    const fs::path full = scratch("full.csv"), part = scratch("part.csv");
    cfg.out = full.string();
    run_experiment(cfg);
    const std::string all = slurp(full);

    // keep the header plus five rows and leave a cursor behind
    std::istringstream in(all);
    std::string line, kept;
    for (int i = 0; i < 6 && std::getline(in, line); ++i)
        kept += line + "\n";
    cfg.out = part.string();
    {
        std::ofstream o(part, std::ios::binary);
        o << kept;
        std::ofstream cur(part.string() + ".cursor");
        cur << json{{"next", 5}, {"total", 12}, {"config", cfg.to_json().dump()}}.dump();
    }
    RunOptions opt;
    opt.resume = true;
    const auto r = run_experiment(cfg, opt);
    CHECK(r.resumed_from == 5);
    CHECK(r.records.size() == 12);
    CHECK(slurp(part) == all);
    CHECK_FALSE(fs::exists(part.string() + ".cursor"));

    // a cursor from another config is refused
    {
        std::ofstream cur(part.string() + ".cursor");
        cur << json{{"next", 1}, {"total", 12}, {"config", "{}"}}.dump();
    }
    CHECK_THROWS_AS(run_experiment(cfg, opt), ConfigError);
}

TEST_CASE("a stop request keeps the finished prefix")
{
    auto cfg = small_scaling();
    const fs::path p = scratch("stopped.csv");
    cfg.out = p.string();
    std::atomic<bool> stop{true};
    RunOptions opt;
    opt.stop = &stop;
    const auto r = run_experiment(cfg, opt);
    CHECK(r.interrupted);
    CHECK(r.records.empty());
    const auto cursor = json::parse(slurp(p.string() + ".cursor"));
    CHECK(cursor.at("next") == 0);
    CHECK(cursor.at("total") == 12);
    stop = false;
    opt.resume = true;
    const auto done = run_experiment(cfg, opt);
    CHECK_FALSE(done.interrupted);
    CHECK(done.records.size() == 12);
}

TEST_CASE("power-law fit")
{
    std::vector<std::pair<double, double>> pts;
    for (double x : {0.1, 0.2, 0.3, 0.4, 0.5})
        pts.emplace_back(x, 2.0 * std::pow(x, 3.0));
    const auto f = fit_power_law(pts);
    CHECK(f.exponent == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.constant == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.points == 5);
    CHECK(f.ci_low <= 3.0 + 1e-9);
    CHECK(f.ci_high >= 3.0 - 1e-9);

    // noisy points: the interval widens around the estimate
    pts = {{0.1, 0.0021}, {0.2, 0.015}, {0.3, 0.057}, {0.4, 0.12}, {0.5, 0.26}};
    const auto g = fit_power_law(pts);
    CHECK(g.ci_low < g.exponent);
    CHECK(g.exponent < g.ci_high);
    CHECK(g.exponent_se > 0);
}

TEST_CASE("aggregation")
{
    CHECK_THROWS_AS(aggregate_csv(""), FormatError);
    CHECK_THROWS_AS(aggregate_csv("a,b\n"), FormatError);
    CHECK_THROWS_AS(aggregate_csv("experiment,n,param,stream,x\nm,10,0.1,0\n"), FormatError);

    // header only
    CHECK(aggregate_csv("experiment,n,param,stream,x\n") == "experiment\tn\tparam\tcount\tx_mean\tx_se\n");

    // single row: no standard error
    CHECK(aggregate_csv("experiment,n,param,stream,x\nm,10,0.1,0,4\n") ==
          "experiment\tn\tparam\tcount\tx_mean\tx_se\nm\t10\t0.1\t1\t4\t\n");

    const std::string two = "experiment,n,param,stream,x\n"
                            "m,10,0.1,0,1\n"
                            "m,10,0.1,1,3\n"
                            "m,10,0.2,2,5\n"
                            "m,10,0.2,3,5\n";
    CHECK(aggregate_csv(two) == "experiment\tn\tparam\tcount\tx_mean\tx_se\n"
                                "m\t10\t0.1\t2\t2\t1\n"
                                "m\t10\t0.2\t2\t5\t0\n");

    // fitted metric column: exact power law reproduced at each cell
    const std::string fitted = "experiment,n,param,stream,deficit_per_n\n"
                               "m,10,0.1,0,0.002\n"
                               "m,10,0.2,1,0.016\n";
    std::istringstream rows(aggregate_csv(fitted));
    std::string line;
    std::getline(rows, line);
    CHECK(line.find("deficit_per_n_fit") != std::string::npos);
    std::getline(rows, line);
    const double fit = std::stod(line.substr(line.rfind('\t') + 1));
    CHECK(fit == doctest::Approx(0.002));
}
