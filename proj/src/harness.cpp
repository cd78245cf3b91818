#include "phaselab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "phaselab/cut.hpp"
#include "phaselab/dlp.hpp"
#include "phaselab/errors.hpp"
#include "phaselab/hom.hpp"
#include "phaselab/random_models.hpp"
#include "phaselab/tournament.hpp"

namespace phaselab {

using nlohmann::json;

// ---------------------------------------------------------------- config

double ExperimentConfig::tolerance(const std::string& key) const
{
    auto it = tolerances.find(key);
    if (it == tolerances.end())
        throw ConfigError("missing tolerance \"" + key + "\"");
    return it->second;
}

json ExperimentConfig::to_json() const
{
    return {{"experiment", experiment}, {"grid", grid},         {"n", ns},
            {"trials", trials},         {"seed", seed},         {"mode", mode},
            {"p_rule", p_rule},         {"alpha", alpha},       {"ell_min", ell_min},
            {"ell_max", ell_max},       {"profile_only", profile_only}, {"max_core", max_core},
            {"hero_budget", hero_budget}, {"cross_check", cross_check}, {"tolerances", tolerances}};
}

namespace {

const std::vector<std::string> known_experiments = {"maxcut_scaling", "dlp_stats", "sandwich",
                                                    "bipartization",  "hom",       "tournament"};

template <typename T>
void take(const json& j, const char* key, T& dst)
{
    if (!j.contains(key))
        return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field \"") + key + "\": " + e.what());
    }
}

} // namespace

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> allowed = {
        "experiment", "grid",    "epsilon",   "n",           "trials",      "seed",     "workers",
        "out",        "mode",    "p_rule",    "alpha",       "ell_min",     "ell_max",  "profile_only",
        "max_core",   "hero_budget", "cross_check", "tolerances", "description"};
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config field \"" + key + "\"");

    ExperimentConfig c;
    take(j, "experiment", c.experiment);
    take(j, "grid", c.grid);
    take(j, "epsilon", c.grid);
    take(j, "n", c.ns);
    take(j, "trials", c.trials);
    take(j, "seed", c.seed);
    take(j, "workers", c.workers);
    take(j, "out", c.out);
    take(j, "mode", c.mode);
    take(j, "p_rule", c.p_rule);
    take(j, "alpha", c.alpha);
    take(j, "ell_min", c.ell_min);
    take(j, "ell_max", c.ell_max);
    take(j, "profile_only", c.profile_only);
    take(j, "max_core", c.max_core);
    take(j, "hero_budget", c.hero_budget);
    take(j, "cross_check", c.cross_check);
    take(j, "tolerances", c.tolerances);

    if (std::find(known_experiments.begin(), known_experiments.end(), c.experiment) == known_experiments.end())
        throw ConfigError("unknown experiment \"" + c.experiment + "\"");
    if (c.grid.empty())
        throw ConfigError("grid must be non-empty");
    if (c.ns.empty())
        throw ConfigError("n grid must be non-empty");
    if (c.trials < 1)
        throw ConfigError("trials must be at least 1");
    if (c.workers < 1)
        throw ConfigError("workers must be at least 1");
    for (std::uint32_t n : c.ns)
        if (n < 1)
            throw ConfigError("n values must be positive");

    const bool c_grid = c.experiment == "tournament" && (c.p_rule == "c" || c.p_rule == "nlogn");
    for (double x : c.grid) {
        if (c_grid ? !(x >= 0.0) : !(x > 0.0 && x < 1.0))
            throw ConfigError(c_grid ? "grid values must be non-negative" : "epsilon values must lie in (0, 1)");
    }
    if (c.experiment == "tournament") {
        static const std::vector<std::string> modes = {"band", "hero", "kscan", "stats"};
        static const std::vector<std::string> rules = {"minus", "plus", "c", "nlogn"};
        if (std::find(modes.begin(), modes.end(), c.mode) == modes.end())
            throw ConfigError("tournament mode must be band, hero, kscan or stats");
        if (std::find(rules.begin(), rules.end(), c.p_rule) == rules.end())
            throw ConfigError("p_rule must be minus, plus, c or nlogn");
        if (c.mode == "kscan")
            for (std::uint32_t n : c.ns)
                if (n > chromatic_full_guard)
                    throw ConfigError("kscan needs n <= 14");
        if (c.alpha < 0.0 || c.alpha > 1.0)
            throw ConfigError("alpha must lie in (0, 1], or 0 for n^(-1/6)");
    }
    if (c.ell_min < 1 || c.ell_max < c.ell_min)
        throw ConfigError("need 1 <= ell_min <= ell_max");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------- records

double TrialRecord::stat(const std::string& key) const
{
    for (const auto& [k, v] : stats)
        if (k == key)
            return v;
    throw std::out_of_range("no statistic \"" + key + "\"");
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_header(const TrialRecord& r)
{
    std::string s = "experiment,n,param,stream";
    for (const auto& kv : r.stats)
        s += "," + kv.first;
    return s;
}

std::string csv_row(const TrialRecord& r)
{
    std::string s = r.experiment + "," + std::to_string(r.n) + "," + format_number(r.param) + "," +
                    std::to_string(r.stream);
    for (const auto& kv : r.stats)
        s += "," + format_number(kv.second);
    return s;
}

namespace {

double parse_number(const std::string& s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FormatError("not a number: \"" + s + "\"");
    return x;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep))
        out.push_back(cur);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

struct ParsedCsv {
    std::vector<std::string> stat_names;
    std::vector<TrialRecord> records;
};

ParsedCsv parse_csv(const std::string& text)
{
    ParsedCsv out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("empty CSV: header row required");
    const auto head = split(line, ',');
    if (head.size() < 4 || head[0] != "experiment" || head[1] != "n" || head[2] != "param" || head[3] != "stream")
        throw FormatError("CSV header must start with experiment,n,param,stream");
    out.stat_names.assign(head.begin() + 4, head.end());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != head.size())
            throw FormatError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(head.size()) +
                              " fields");
        TrialRecord r;
        r.experiment = f[0];
        try {
            r.n = static_cast<std::uint32_t>(std::stoul(f[1]));
            r.stream = std::stoull(f[3]);
        } catch (const std::exception&) {
            throw FormatError("CSV line " + std::to_string(line_no) + ": bad n or stream");
        }
        r.param = parse_number(f[2]);
        for (std::size_t i = 4; i < f.size(); ++i)
            r.stats.emplace_back(head[i], parse_number(f[i]));
        out.records.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------- runner

struct Cell {
    double param;
    std::uint32_t n;
    std::uint64_t stream;
};

using TrialFn = std::function<std::vector<double>(const Cell&, RngSpec)>;

std::vector<Cell> make_cells(const ExperimentConfig& cfg)
{
    std::vector<Cell> cells;
    std::uint64_t stream = 0;
    for (double x : cfg.grid)
        for (std::uint32_t n : cfg.ns)
            for (std::uint32_t t = 0; t < cfg.trials; ++t)
                cells.push_back({x, n, stream++});
    return cells;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path sidecar(const std::string& out, const char* suffix)
{
    return std::filesystem::path(out + suffix);
}

ExperimentResult run_trials(const ExperimentConfig& cfg, const RunOptions& opt, const std::vector<std::string>& columns,
                            const TrialFn& fn)
{
    const std::vector<Cell> cells = make_cells(cfg);
    ExperimentResult result;
    const std::string fingerprint = cfg.to_json().dump();

    std::uint64_t start = 0;
    std::vector<TrialRecord> previous;
    if (opt.resume && !cfg.out.empty() && std::filesystem::exists(sidecar(cfg.out, ".cursor"))) {
        json cursor;
        try {
            cursor = json::parse(slurp(sidecar(cfg.out, ".cursor")));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("unreadable resumption cursor: ") + e.what());
        }
        if (cursor.value("config", std::string()) != fingerprint)
            throw ConfigError("resumption cursor belongs to a different config");
        start = cursor.at("next").get<std::uint64_t>();
        if (start > cells.size())
            throw ConfigError("resumption cursor past the end of the run");
        previous = parse_csv(slurp(cfg.out)).records;
        if (previous.size() != start)
            throw ConfigError("CSV does not match the resumption cursor");
        result.resumed_from = start;
    }

    const std::size_t todo = cells.size() - start;
    std::vector<std::optional<TrialRecord>> slots(todo);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    const std::atomic<bool>* stop = opt.stop ? opt.stop : &interrupt_flag();

    auto worker = [&] {
        for (;;) {
            if (stop->load() || failed.load())
                return;
            const std::size_t i = next.fetch_add(1);
            if (i >= todo)
                return;
            const Cell& cell = cells[start + i];
            try {
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<double> values = fn(cell, RngSpec{cfg.seed, cell.stream});
                const auto t1 = std::chrono::steady_clock::now();
                TrialRecord r;
                r.experiment = cfg.experiment;
                r.n = cell.n;
                r.param = cell.param;
                r.stream = cell.stream;
                for (std::size_t k = 0; k < columns.size(); ++k)
                    r.stats.emplace_back(columns[k], values.at(k));
                r.seconds = std::chrono::duration<double>(t1 - t0).count();
                slots[i] = std::move(r);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error)
                    error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::size_t>(todo, 1))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);

    std::size_t done = 0;
    while (done < todo && slots[done])
        ++done;
    result.interrupted = done < todo;
    for (std::size_t i = 0; i < done; ++i)
        result.records.push_back(std::move(*slots[i]));

    if (!cfg.out.empty()) {
        const bool append = start > 0;
        std::ofstream csv(cfg.out, append ? std::ios::app | std::ios::binary : std::ios::trunc | std::ios::binary);
        if (!csv)
            throw ConfigError("cannot write " + cfg.out);
        if (!append) {
            TrialRecord proto;
            for (const auto& c : columns)
                proto.stats.emplace_back(c, 0.0);
            csv << csv_header(proto) << '\n';
        }
        for (const auto& r : result.records)
            csv << csv_row(r) << '\n';
        csv.close();

        if (opt.write_timing) {
            std::ofstream timing(sidecar(cfg.out, ".timing.csv"), append ? std::ios::app : std::ios::trunc);
            if (!append)
                timing << "stream,seconds\n";
            for (const auto& r : result.records)
                timing << r.stream << ',' << format_number(r.seconds) << '\n';
        }
        const auto cursor_path = sidecar(cfg.out, ".cursor");
        if (result.interrupted) {
            std::ofstream cur(cursor_path, std::ios::trunc);
            cur << json{{"next", start + done}, {"total", cells.size()}, {"config", fingerprint}}.dump() << '\n';
        } else {
            std::error_code ec;
            std::filesystem::remove(cursor_path, ec);
        }
    }

    if (!previous.empty())
        result.records.insert(result.records.begin(), std::make_move_iterator(previous.begin()),
                              std::make_move_iterator(previous.end()));
    return result;
}

// ---------------------------------------------------------------- summaries

struct CellStats {
    double param;
    std::uint32_t n;
    std::vector<const TrialRecord*> rows;

    double mean(const std::string& key) const
    {
        double s = 0;
        for (auto* r : rows)
            s += r->stat(key);
        return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
    }
    double sum(const std::string& key) const
    {
        double s = 0;
        for (auto* r : rows)
            s += r->stat(key);
        return s;
    }
};

std::vector<CellStats> group_cells(const std::vector<TrialRecord>& records)
{
    std::vector<CellStats> cells;
    for (const auto& r : records) {
        auto it = std::find_if(cells.begin(), cells.end(),
                               [&](const CellStats& c) { return c.param == r.param && c.n == r.n; });
        if (it == cells.end()) {
            cells.push_back({r.param, r.n, {}});
            it = cells.end() - 1;
        }
        it->rows.push_back(&r);
    }
    return cells;
}

json number_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

json fit_json(const ScalingFit& f)
{
    return {{"metric", f.metric},          {"n", f.n},
            {"exponent", number_or_null(f.exponent)}, {"constant", number_or_null(f.constant)},
            {"exponent_se", number_or_null(f.exponent_se)}, {"log_constant_se", number_or_null(f.log_constant_se)},
            {"r_squared", number_or_null(f.r_squared)}, {"ci_low", number_or_null(f.ci_low)},
            {"ci_high", number_or_null(f.ci_high)}, {"points", f.points}};
}

void add_check(json& summary, const std::string& name, const json& cell, double value, const std::string& rule,
               bool pass)
{
    summary["checks"].push_back(
        {{"name", name}, {"cell", cell}, {"value", number_or_null(value)}, {"rule", rule}, {"pass", pass}});
}

json cell_key(const CellStats& c)
{
    return {{"param", c.param}, {"n", c.n}};
}

json base_summary(const ExperimentConfig& cfg, const ExperimentResult& r)
{
    return {{"experiment", cfg.experiment}, {"records", r.records.size()}, {"interrupted", r.interrupted},
            {"cells", json::array()},       {"checks", json::array()},     {"fits", json::array()}};
}

double tournament_p(const ExperimentConfig& cfg, double x, std::uint32_t n)
{
    const double nd = static_cast<double>(n);
    double p = 0;
    if (cfg.p_rule == "minus")
        p = (1.0 - x) / nd;
    else if (cfg.p_rule == "plus")
        p = (1.0 + x) / nd;
    else if (cfg.p_rule == "c")
        p = x / nd;
    else
        p = n > 1 ? 1.0 / (nd * std::log(nd)) : 1.0;
    return std::clamp(p, 0.0, 1.0);
}

std::string fmt_rule(const char* op, double bound)
{
    return std::string(op) + " " + format_number(bound);
}

} // namespace

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points)
{
    ScalingFit f;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> xs, ys;
    for (const auto& [x, y] : points) {
        if (x > 0 && y > 0) {
            xs.push_back(std::log(x));
            ys.push_back(std::log(y));
        }
    }
    f.points = xs.size();
    f.exponent = f.constant = f.exponent_se = f.log_constant_se = f.r_squared = f.ci_low = f.ci_high = nan;
    if (xs.size() < 2)
        return f;
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0)
        return f;
    const double b = sxy / sxx;
    const double a = my - b * mx;
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double res = ys[i] - a - b * xs[i];
        sse += res * res;
    }
    f.exponent = b;
    f.constant = std::exp(a);
    f.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
    if (xs.size() > 2) {
        const double s2 = sse / (k - 2);
        f.exponent_se = std::sqrt(s2 / sxx);
        f.log_constant_se = std::sqrt(s2 * (1.0 / k + mx * mx / sxx));
        const boost::math::students_t dist(k - 2);
        const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
        f.ci_low = b - tq * f.exponent_se;
        f.ci_high = b + tq * f.exponent_se;
    }
    return f;
}

// ---------------------------------------------------------------- experiments

ExperimentResult run_maxcut_scaling(const ExperimentConfig& cfg, const RunOptions& opt)
{
    const std::vector<std::string> columns = {
        "edges",       "giant_vertices", "core_vertices", "core_edges",   "kernel_paths", "odd_paths",
        "deficit",     "deficit_per_n",  "odd_deficit_per_n", "dlp_lambda", "dlp_kernel_edges", "dlp_density",
        "dlp_odd_paths", "dlp_odd_fraction"};
    auto trial = [](const Cell& c, RngSpec spec) {
        const double nd = static_cast<double>(c.n);
        const SparseGraph g = sample_gnp(c.n, std::min(1.0, (1.0 + c.param) / nd), spec.substream(1));
        const CutResult cut = giant_cut_algorithm(g);

        const auto comps = connected_components(g);
        const InducedSubgraph giant = induced_subgraph(g, comps.front());
        const InducedSubgraph core = two_core(giant.graph);
        const auto paths = kernel_paths(core.graph);
        const double odd = static_cast<double>(odd_path_bipartization(core.graph).size());

        const DlpSample dlp = sample_dlp_core(c.n, c.param, spec.substream(2));
        double dlp_odd = 0;
        for (std::uint32_t len : dlp.core.length)
            dlp_odd += len % 2;
        const double ke = static_cast<double>(dlp.core.kernel.num_edges());
        return std::vector<double>{static_cast<double>(g.num_edges()),
                                   static_cast<double>(giant.graph.num_vertices()),
                                   static_cast<double>(core.graph.num_vertices()),
                                   static_cast<double>(core.graph.num_edges()),
                                   static_cast<double>(paths.size()),
                                   odd,
                                   static_cast<double>(cut.deleted.size()),
                                   static_cast<double>(cut.deleted.size()) / nd,
                                   odd / nd,
                                   dlp.profile.Lambda,
                                   ke,
                                   ke / nd,
                                   dlp_odd,
                                   ke > 0 ? dlp_odd / ke : 0.0};
    };
    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    const auto cells = group_cells(r.records);
    for (const auto& c : cells) {
        const DlpParams par = make_dlp_params(c.n, c.param);
        const double paths = c.sum("dlp_kernel_edges");
        const double frac = paths > 0 ? c.sum("dlp_odd_paths") / paths : 0.0;
        const double p_odd = 1.0 / (1.0 + par.mu);
        const double se = paths > 0 ? std::sqrt(p_odd * (1 - p_odd) / paths) : 0.0;
        r.summary["cells"].push_back({{"param", c.param},
                                      {"n", c.n},
                                      {"trials", c.rows.size()},
                                      {"deficit_per_n", c.mean("deficit_per_n")},
                                      {"odd_deficit_per_n", c.mean("odd_deficit_per_n")},
                                      {"dlp_density", c.mean("dlp_density")},
                                      {"density_oracle", expected_kernel_density(par.lambda - par.mu)},
                                      {"two_eps_cubed", 2 * std::pow(c.param, 3)},
                                      {"dlp_odd_fraction", frac},
                                      {"odd_fraction_target", p_odd},
                                      {"odd_fraction_z", se > 0 ? (frac - p_odd) / se : 0.0}});
        if (cfg.tolerances.count("odd_sigma")) {
            const double z = se > 0 ? std::abs(frac - p_odd) / se : 0.0;
            add_check(r.summary, "odd_fraction", cell_key(c), z, fmt_rule("|z| <=", cfg.tolerance("odd_sigma")),
                      paths > 0 && z <= cfg.tolerance("odd_sigma"));
        }
    }
    std::vector<std::uint32_t> ns;
    for (const auto& c : cells)
        if (std::find(ns.begin(), ns.end(), c.n) == ns.end())
            ns.push_back(c.n);
    for (std::uint32_t n : ns) {
        for (const char* metric : {"deficit_per_n", "odd_deficit_per_n", "dlp_density"}) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& c : cells)
                if (c.n == n)
                    pts.emplace_back(c.param, c.mean(metric));
            ScalingFit f = fit_power_law(pts);
            f.metric = metric;
            f.n = n;
            r.fits.push_back(f);
            r.summary["fits"].push_back(fit_json(f));
            if (std::string(metric) == "deficit_per_n" && cfg.tolerances.count("exponent_lo")) {
                const double lo = cfg.tolerance("exponent_lo");
                const double hi = cfg.tolerance("exponent_hi");
                add_check(r.summary, "deficit_exponent", {{"n", n}}, f.exponent,
                          "in [" + format_number(lo) + ", " + format_number(hi) + "]",
                          std::isfinite(f.exponent) && f.exponent >= lo && f.exponent <= hi);
            }
        }
    }
    return r;
}

ExperimentResult run_dlp_stats(const ExperimentConfig& cfg, const RunOptions& opt)
{
    const std::vector<std::string> columns = {"lambda_hat", "attempts",  "kernel_vertices", "kernel_edges",
                                              "density",    "paths",     "odd_paths"};
    const bool profile_only = cfg.profile_only;
    auto trial = [profile_only](const Cell& c, RngSpec spec) {
        const DlpParams par = make_dlp_params(c.n, c.param);
        const double nd = static_cast<double>(c.n);
        if (profile_only) {
            Rng rng(spec.substream(1));
            const DegreeProfile prof = sample_degree_profile(c.n, par.lambda, par.mu, rng);
            const double ke = static_cast<double>(prof.truncated_sum / 2);
            return std::vector<double>{prof.Lambda, static_cast<double>(prof.attempts),
                                       static_cast<double>(prof.kernel_vertices), ke, ke / nd, 0.0, 0.0};
        }
        const DlpSample s = sample_dlp_core(c.n, c.param, spec);
        double odd = 0;
        for (std::uint32_t len : s.core.length)
            odd += len % 2;
        const double ke = static_cast<double>(s.core.kernel.num_edges());
        return std::vector<double>{s.profile.Lambda, static_cast<double>(s.profile.attempts),
                                   static_cast<double>(s.profile.kernel_vertices), ke, ke / nd, ke, odd};
    };
    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    for (const auto& c : group_cells(r.records)) {
        const DlpParams par = make_dlp_params(c.n, c.param);
        const double density = c.mean("density");
        const double oracle = expected_kernel_density(par.lambda - par.mu);
        const double cubic = 2 * std::pow(c.param, 3);
        const double paths = c.sum("paths");
        const double frac = paths > 0 ? c.sum("odd_paths") / paths : 0.0;
        const double p_odd = 1.0 / (1.0 + par.mu);
        const double se = paths > 0 ? std::sqrt(p_odd * (1 - p_odd) / paths) : 0.0;
        const double attempts = c.mean("attempts");
        r.summary["cells"].push_back({{"param", c.param},
                                      {"n", c.n},
                                      {"trials", c.rows.size()},
                                      {"mu", par.mu},
                                      {"density", density},
                                      {"density_oracle", oracle},
                                      {"two_eps_cubed", cubic},
                                      {"mean_attempts", attempts},
                                      {"paths", paths},
                                      {"odd_fraction", frac},
                                      {"odd_fraction_target", p_odd}});
        const json key = cell_key(c);
        if (cfg.tolerances.count("density_rel_oracle")) {
            const double rel = std::abs(density - oracle) / oracle;
            add_check(r.summary, "density_vs_oracle", key, rel, fmt_rule("<=", cfg.tolerance("density_rel_oracle")),
                      rel <= cfg.tolerance("density_rel_oracle"));
        }
        if (cfg.tolerances.count("density_rel_2eps3")) {
            const double rel = std::abs(density - cubic) / cubic;
            add_check(r.summary, "density_vs_2eps3", key, rel, fmt_rule("<=", cfg.tolerance("density_rel_2eps3")),
                      rel <= cfg.tolerance("density_rel_2eps3"));
        }
        if (cfg.tolerances.count("attempts_max"))
            add_check(r.summary, "parity_attempts", key, attempts, fmt_rule("<=", cfg.tolerance("attempts_max")),
                      attempts <= cfg.tolerance("attempts_max"));
        if (cfg.tolerances.count("odd_sigma")) {
            const double z = se > 0 ? std::abs(frac - p_odd) / se : 0.0;
            add_check(r.summary, "odd_fraction", key, z, fmt_rule("|z| <=", cfg.tolerance("odd_sigma")),
                      paths > 0 && z <= cfg.tolerance("odd_sigma"));
        }
        if (cfg.tolerances.count("min_paths"))
            add_check(r.summary, "path_draws", key, paths, fmt_rule(">=", cfg.tolerance("min_paths")),
                      paths >= cfg.tolerance("min_paths"));
    }
    return r;
}

ExperimentResult run_sandwich(const ExperimentConfig& cfg, const RunOptions& opt)
{
    const std::vector<std::string> columns = {"attempts", "core_vertices", "kernel_vertices", "kernel_edges",
                                              "lower",    "exact",         "upper",           "violation"};
    const std::uint32_t cap = cfg.max_core;
    auto trial = [cap](const Cell& c, RngSpec spec) {
        constexpr std::uint64_t max_attempts = 100'000;
        for (std::uint64_t a = 0; a < max_attempts; ++a) {
            const DlpSample s = sample_dlp_core(c.n, c.param, spec.substream(a));
            const std::size_t v = s.core.graph.num_vertices();
            if (v < 1 || v > cap || s.core.kernel.num_vertices > bad_edge_guard)
                continue;
            double lower = -1, exact = -1, upper = -1, violation = 0;
            try {
                const Sandwich sw = sandwich_check(s.core, cap);
                lower = static_cast<double>(sw.lower);
                exact = static_cast<double>(sw.exact.value());
                upper = static_cast<double>(sw.upper);
            } catch (const std::logic_error&) {
                violation = 1;
            }
            return std::vector<double>{static_cast<double>(a + 1),
                                       static_cast<double>(v),
                                       static_cast<double>(s.core.kernel.num_vertices),
                                       static_cast<double>(s.core.kernel.num_edges()),
                                       lower,
                                       exact,
                                       upper,
                                       violation};
        }
        throw std::runtime_error("sandwich: no core of size 1.." + std::to_string(cap) + " at n = " +
                                 std::to_string(c.n) + ", eps = " + format_number(c.param));
    };
    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    double violations = 0;
    for (const auto& c : group_cells(r.records)) {
        violations += c.sum("violation");
        r.summary["cells"].push_back({{"param", c.param},
                                      {"n", c.n},
                                      {"trials", c.rows.size()},
                                      {"lower", c.mean("lower")},
                                      {"exact", c.mean("exact")},
                                      {"upper", c.mean("upper")},
                                      {"core_vertices", c.mean("core_vertices")},
                                      {"violations", c.sum("violation")}});
    }
    if (cfg.tolerances.count("max_violations"))
        add_check(r.summary, "sandwich_violations", nullptr, violations,
                  fmt_rule("<=", cfg.tolerance("max_violations")), violations <= cfg.tolerance("max_violations"));
    return r;
}

ExperimentResult run_bipartization(const ExperimentConfig& cfg, const RunOptions& opt)
{
    const std::vector<std::string> columns = {"edges", "deleted", "bipartite", "cut_consistent"};
    auto trial = [](const Cell& c, RngSpec spec) {
        const SparseGraph g = sample_gnp(c.n, std::min(1.0, (1.0 + c.param) / c.n), spec.substream(1));
        CutResult cut;
        try {
            cut = giant_cut_algorithm(g);
        } catch (const std::logic_error&) {
            return std::vector<double>{static_cast<double>(g.num_edges()), -1, 0, 0};
        }
        // re-verify independently of the algorithm's own certificate
        const SparseGraph rest = g.without_edges(cut.deleted);
        const bool bip = is_bipartite(rest).has_value();
        const bool consistent = cut.partition.cut_size(rest) == cut.cut_size &&
                                cut.cut_size + cut.deleted.size() == g.num_edges();
        return std::vector<double>{static_cast<double>(g.num_edges()), static_cast<double>(cut.deleted.size()),
                                   bip ? 1.0 : 0.0, consistent ? 1.0 : 0.0};
    };
    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    for (const auto& c : group_cells(r.records)) {
        const double frac = c.mean("bipartite");
        r.summary["cells"].push_back({{"param", c.param},
                                      {"n", c.n},
                                      {"trials", c.rows.size()},
                                      {"bipartite_fraction", frac},
                                      {"consistent_fraction", c.mean("cut_consistent")},
                                      {"deleted", c.mean("deleted")}});
        if (cfg.tolerances.count("min_bipartite_fraction"))
            add_check(r.summary, "bipartite_fraction", cell_key(c), frac,
                      fmt_rule(">=", cfg.tolerance("min_bipartite_fraction")),
                      frac >= cfg.tolerance("min_bipartite_fraction") && c.mean("cut_consistent") == 1.0);
    }
    return r;
}

ExperimentResult run_hom_experiment(const ExperimentConfig& cfg, const RunOptions& opt)
{
    const std::vector<std::string> columns = {"edges",   "bound",  "bound_exact", "least_certified_ell",
                                              "delta",   "ell_eps", "checked",    "unsound"};
    const std::uint32_t lo = cfg.ell_min, hi = cfg.ell_max;
    const bool cross = cfg.cross_check;
    auto trial = [lo, hi, cross](const Cell& c, RngSpec spec) {
        const SparseGraph g = sample_gnp(c.n, std::min(1.0, (1.0 + c.param) / c.n), spec.substream(1));
        const DistBound bound = dist_bp_lower_bound(g);
        const auto b = static_cast<long long>(bound.value);
        double least = 0, checked = 0, unsound = 0;
        const HomGuard guard;
        const bool small = g.num_vertices() <= guard.max_vertices && g.num_edges() <= guard.max_edges;
        for (std::uint32_t ell = lo; ell <= hi; ++ell) {
            if (!no_hom_certificate(g, ell, b))
                continue;
            if (least == 0)
                least = ell;
            if (cross && small) {
                ++checked;
                if (hom_to_odd_cycle(g, ell))
                    ++unsound;
            }
        }
        const double delta = g.num_edges() > 0 ? static_cast<double>(bound.value) / g.num_edges() : 0.0;
        const double ell_eps = delta > 0 && delta < 1 ? ell_epsilon(delta) : 0.0;
        return std::vector<double>{static_cast<double>(g.num_edges()),
                                   static_cast<double>(bound.value),
                                   bound.exact ? 1.0 : 0.0,
                                   least,
                                   delta,
                                   ell_eps,
                                   checked,
                                   unsound};
    };
    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    double unsound = 0;
    const auto cells = group_cells(r.records);
    for (const auto& c : cells) {
        unsound += c.sum("unsound");
        const double delta = c.mean("delta");
        r.summary["cells"].push_back({{"param", c.param},
                                      {"n", c.n},
                                      {"trials", c.rows.size()},
                                      {"mean_delta", delta},
                                      {"ell_eps_of_mean_delta", delta > 0 && delta < 1 ? json(ell_epsilon(delta))
                                                                                       : json(nullptr)},
                                      {"certified_fraction",
                                       std::count_if(c.rows.begin(), c.rows.end(),
                                                     [](auto* row) { return row->stat("least_certified_ell") > 0; }) /
                                           static_cast<double>(c.rows.size())},
                                      {"checked", c.sum("checked")},
                                      {"unsound", c.sum("unsound")}});
    }
    if (cfg.tolerances.count("max_unsound"))
        add_check(r.summary, "unsound_certificates", nullptr, unsound, fmt_rule("<=", cfg.tolerance("max_unsound")),
                  unsound <= cfg.tolerance("max_unsound"));
    if (cfg.tolerances.count("ell_trend")) {
        // ell_eps of the mean delta must not increase with epsilon, per n
        bool ok = true;
        for (const auto& a : cells)
            for (const auto& b : cells)
                if (a.n == b.n && a.param < b.param) {
                    const double da = a.mean("delta"), db = b.mean("delta");
                    if (da > 0 && db > 0 && da < 1 && db < 1 && ell_epsilon(db) > ell_epsilon(da))
                        ok = false;
                }
        add_check(r.summary, "ell_eps_trend", nullptr, ok ? 1.0 : 0.0, "nonincreasing in eps", ok);
    }
    return r;
}

ExperimentResult run_tournament_threshold(const ExperimentConfig& cfg, const RunOptions& opt)
{
    std::vector<std::string> columns;
    TrialFn trial;
    const ExperimentConfig c0 = cfg;
    if (cfg.mode == "band") {
        columns = {"p", "backedges", "bipartite_backedge_graph", "two_colorable"};
        trial = [c0](const Cell& c, RngSpec spec) {
            const double p = tournament_p(c0, c.param, c.n);
            const Tournament t = sample_tournament(c.n, p, spec.substream(1));
            const bool bip = is_bipartite(backedge_graph(t)).has_value();
            double exact = -1;
            if (c.n <= two_coloring_guard)
                exact = two_coloring_exact(t).has_value() ? 1.0 : 0.0;
            return std::vector<double>{p, static_cast<double>(t.num_backedges()), bip ? 1.0 : 0.0, exact};
        };
    } else if (cfg.mode == "hero") {
        columns = {"p", "backedges", "found", "exhausted", "triples", "dist_tour_bp"};
        trial = [c0](const Cell& c, RngSpec spec) {
            const double p = tournament_p(c0, c.param, c.n);
            const Tournament t = sample_tournament(c.n, p, spec.substream(1));
            const HeroSearch h = find_h_copy(t, c0.hero_budget);
            double dist = -1;
            if (c.n <= chromatic_full_guard)
                dist = static_cast<double>(dist_tour_bp_exact(t));
            return std::vector<double>{p,
                                       static_cast<double>(t.num_backedges()),
                                       h.copy ? 1.0 : 0.0,
                                       h.exhausted ? 1.0 : 0.0,
                                       static_cast<double>(h.triples_scanned),
                                       dist};
        };
    } else if (cfg.mode == "kscan") {
        columns = {"p", "backedges", "chi"};
        trial = [c0](const Cell& c, RngSpec spec) {
            const double p = tournament_p(c0, c.param, c.n);
            const Tournament t = sample_tournament(c.n, p, spec.substream(1));
            const TournamentColoring col = chromatic_number_exact(t);
            return std::vector<double>{p, static_cast<double>(t.num_backedges()), static_cast<double>(col.colors)};
        };
    } else {
        columns = {"p", "alpha", "backedges", "short_backedges", "max_degree", "item_count", "item_short",
                   "item_degree", "all_items"};
        const double sigma = cfg.tolerances.count("sigma") ? cfg.tolerance("sigma") : 3.0;
        trial = [c0, sigma](const Cell& c, RngSpec spec) {
            const double nd = static_cast<double>(c.n);
            const double p = tournament_p(c0, c.param, c.n);
            const double alpha = c0.alpha > 0 ? c0.alpha : std::pow(nd, -1.0 / 6.0);
            const Tournament t = sample_tournament(c.n, p, spec.substream(1));
            const double pairs = nd * (nd - 1) / 2;
            const double b = static_cast<double>(t.num_backedges());
            const bool item_count = std::abs(b - pairs * p) <= sigma * std::sqrt(pairs * p * (1 - p));
            const double short_count = b - static_cast<double>(long_backedges(t, alpha).size());
            const double growth = c0.p_rule == "plus" ? 1.0 + c.param : p * nd;
            const bool item_short = short_count <= 2 * alpha * growth * nd;
            std::size_t maxdeg = 0;
            for (std::uint32_t v = 1; v <= c.n; ++v)
                maxdeg = std::max(maxdeg, t.backedge_degree(v));
            const bool item_degree = static_cast<double>(maxdeg) <= std::log(nd);
            return std::vector<double>{p,
                                       alpha,
                                       b,
                                       short_count,
                                       static_cast<double>(maxdeg),
                                       item_count ? 1.0 : 0.0,
                                       item_short ? 1.0 : 0.0,
                                       item_degree ? 1.0 : 0.0,
                                       item_count && item_short && item_degree ? 1.0 : 0.0};
        };
    }

    ExperimentResult r = run_trials(cfg, opt, columns, trial);
    r.summary = base_summary(cfg, r);
    const auto cells = group_cells(r.records);
    for (const auto& c : cells) {
        json cell = {{"param", c.param}, {"n", c.n}, {"trials", c.rows.size()}, {"p", c.mean("p")}};
        const json key = cell_key(c);
        if (cfg.mode == "band") {
            const double bip = c.mean("bipartite_backedge_graph");
            cell["bipartite_fraction"] = bip;
            if (cfg.tolerances.count("bip_low"))
                add_check(r.summary, "bipartite_band", key, bip,
                          "in (" + format_number(cfg.tolerance("bip_low")) + ", " +
                              format_number(cfg.tolerance("bip_high")) + ")",
                          bip > cfg.tolerance("bip_low") && bip < cfg.tolerance("bip_high"));
            if (cfg.tolerances.count("bip_min"))
                add_check(r.summary, "bipartite_whp", key, bip, fmt_rule(">=", cfg.tolerance("bip_min")),
                          bip >= cfg.tolerance("bip_min"));
            if (c.n <= two_coloring_guard) {
                const double two = c.mean("two_colorable");
                cell["two_colorable_fraction"] = two;
                if (cfg.tolerances.count("band_low"))
                    add_check(r.summary, "two_colorable_band", key, two,
                              "in (" + format_number(cfg.tolerance("band_low")) + ", " +
                                  format_number(cfg.tolerance("band_high")) + ")",
                              two > cfg.tolerance("band_low") && two < cfg.tolerance("band_high"));
            }
        } else if (cfg.mode == "hero") {
            cell["hero_frequency"] = c.mean("found");
            cell["exhausted_fraction"] = c.mean("exhausted");
            if (c.n <= chromatic_full_guard)
                cell["mean_dist_tour_bp"] = c.mean("dist_tour_bp");
        } else if (cfg.mode == "kscan") {
            cell["mean_chi"] = c.mean("chi");
            std::map<int, double> dist;
            for (auto* row : c.rows)
                dist[static_cast<int>(row->stat("chi"))] += 1.0 / static_cast<double>(c.rows.size());
            json d = json::object();
            for (const auto& [k, f] : dist)
                d[std::to_string(k)] = f;
            cell["chi_distribution"] = d;
        } else {
            const double all = c.mean("all_items");
            cell["all_items_fraction"] = all;
            cell["item_count_fraction"] = c.mean("item_count");
            cell["item_short_fraction"] = c.mean("item_short");
            cell["item_degree_fraction"] = c.mean("item_degree");
            if (cfg.tolerances.count("min_fraction"))
                add_check(r.summary, "claim_items", key, all, fmt_rule(">=", cfg.tolerance("min_fraction")),
                          all >= cfg.tolerance("min_fraction"));
        }
        r.summary["cells"].push_back(cell);
    }
    if (cfg.mode == "hero" && cfg.tolerances.count("hero_monotone")) {
        bool ok = true;
        for (const auto& a : cells)
            for (const auto& b : cells)
                if (a.param == b.param && a.n < b.n && b.mean("found") < a.mean("found"))
                    ok = false;
        add_check(r.summary, "hero_frequency_trend", nullptr, ok ? 1.0 : 0.0, "nondecreasing in n", ok);
    }
    return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt)
{
    if (cfg.experiment == "maxcut_scaling")
        return run_maxcut_scaling(cfg, opt);
    if (cfg.experiment == "dlp_stats")
        return run_dlp_stats(cfg, opt);
    if (cfg.experiment == "sandwich")
        return run_sandwich(cfg, opt);
    if (cfg.experiment == "bipartization")
        return run_bipartization(cfg, opt);
    if (cfg.experiment == "hom")
        return run_hom_experiment(cfg, opt);
    if (cfg.experiment == "tournament")
        return run_tournament_threshold(cfg, opt);
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
}

// ---------------------------------------------------------------- aggregation

std::string aggregate_csv(const std::string& csv, const std::vector<std::string>& fit_metrics)
{
    const ParsedCsv parsed = parse_csv(csv);
    const auto cells = group_cells(parsed.records);

    std::vector<std::string> fitted;
    for (const auto& m : fit_metrics)
        if (std::find(parsed.stat_names.begin(), parsed.stat_names.end(), m) != parsed.stat_names.end())
            fitted.push_back(m);

    // per n, power-law fit of each fitted metric's cell means against param
    std::map<std::pair<std::string, std::uint32_t>, ScalingFit> fits;
    for (const auto& m : fitted) {
        std::map<std::uint32_t, std::vector<std::pair<double, double>>> pts;
        for (const auto& c : cells)
            pts[c.n].emplace_back(c.param, c.mean(m));
        for (const auto& [n, p] : pts)
            fits[{m, n}] = fit_power_law(p);
    }

    std::ostringstream out;
    out << "experiment\tn\tparam\tcount";
    for (const auto& s : parsed.stat_names)
        out << '\t' << s << "_mean\t" << s << "_se";
    for (const auto& m : fitted)
        out << '\t' << m << "_fit";
    out << '\n';
    for (const auto& c : cells) {
        const double k = static_cast<double>(c.rows.size());
        out << c.rows.front()->experiment << '\t' << c.n << '\t' << format_number(c.param) << '\t' << c.rows.size();
        for (const auto& s : parsed.stat_names) {
            const double mean = c.mean(s);
            out << '\t' << format_number(mean) << '\t';
            if (c.rows.size() > 1) {
                double ss = 0;
                for (auto* r : c.rows)
                    ss += (r->stat(s) - mean) * (r->stat(s) - mean);
                out << format_number(std::sqrt(ss / (k - 1) / k));
            }
        }
        for (const auto& m : fitted) {
            const ScalingFit& f = fits.at({m, c.n});
            out << '\t';
            if (std::isfinite(f.exponent))
                out << format_number(f.constant * std::pow(c.param, f.exponent));
        }
        out << '\n';
    }
    return out.str();
}

void emit_plot_data(const std::filesystem::path& csv, const std::filesystem::path& out)
{
    if (!std::filesystem::exists(csv))
        throw FormatError("no such CSV: " + csv.string());
    const std::string text = aggregate_csv(slurp(csv));
    std::ofstream o(out, std::ios::binary | std::ios::trunc);
    if (!o)
        throw FormatError("cannot write " + out.string());
    o << text;
}

// ---------------------------------------------------------------- interrupts

std::atomic<bool>& interrupt_flag()
{
    static std::atomic<bool> flag{false};
    return flag;
}

namespace {
void on_sigint(int)
{
    interrupt_flag().store(true);
}
} // namespace

void install_interrupt_handler()
{
    interrupt_flag(); // construct before any signal can arrive
    std::signal(SIGINT, on_sigint);
}

} // namespace phaselab
