#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phaselab/rng.hpp"

namespace phaselab {

/// Declarative experiment description, usually parsed from JSON.
///
/// `experiment` selects the runner: maxcut_scaling, dlp_stats, sandwich,
/// bipartization, hom, tournament. `grid` holds the epsilon values; for the
/// tournament runner with p_rule "c" it holds the constants c of p = c/n.
struct ExperimentConfig {
    std::string experiment;
    std::vector<double> grid;
    std::vector<std::uint32_t> ns;
    std::uint32_t trials = 1;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;

    // per-experiment options
    std::string mode;                   // tournament: band, hero, kscan, stats
    std::string p_rule = "minus";       // tournament: minus, plus, c, nlogn
    double alpha = 0.0;                 // tournament stats; <= 0 means n^(-1/6)
    std::uint32_t ell_min = 1, ell_max = 20;
    bool profile_only = false;          // dlp_stats
    std::uint32_t max_core = 30;        // sandwich: v(core) cap
    std::uint64_t hero_budget = 10'000'000;
    bool cross_check = true;            // hom: run the exact solver too
    std::map<std::string, double> tolerances;

    double tolerance(const std::string& key) const;
    nlohmann::json to_json() const;
};

/// Parses and validates; throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// One observation; `stats` keeps the experiment's column order.
struct TrialRecord {
    std::string experiment;
    std::uint32_t n = 0;
    double param = 0.0; // epsilon or c
    std::uint64_t stream = 0;
    std::vector<std::pair<std::string, double>> stats;
    double seconds = 0.0; // wall time, kept out of the CSV

    double stat(const std::string& key) const;
};

/// deficit/n ~ A * eps^B by least squares on logs.
struct ScalingFit {
    std::string metric;
    std::uint32_t n = 0;
    double exponent = 0, constant = 0;
    double exponent_se = 0, log_constant_se = 0;
    double r_squared = 0;
    double ci_low = 0, ci_high = 0; // 95% on the exponent
    std::size_t points = 0;
};

/// Fit over (x, y) pairs with x, y > 0.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::vector<ScalingFit> fits;
    nlohmann::json summary;
    bool interrupted = false;
    std::uint64_t resumed_from = 0;
};

struct RunOptions {
    bool resume = false;          // continue from <out>.cursor if present
    bool write_timing = true;     // <out>.timing.csv
    const std::atomic<bool>* stop = nullptr;
};

/// Runs the configured experiment, writes <out> (CSV) when out is set, and
/// returns every record of this invocation together with the summary.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

ExperimentResult run_maxcut_scaling(const ExperimentConfig& cfg, const RunOptions& opt = {});
ExperimentResult run_dlp_stats(const ExperimentConfig& cfg, const RunOptions& opt = {});
ExperimentResult run_sandwich(const ExperimentConfig& cfg, const RunOptions& opt = {});
ExperimentResult run_bipartization(const ExperimentConfig& cfg, const RunOptions& opt = {});
ExperimentResult run_hom_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});
ExperimentResult run_tournament_threshold(const ExperimentConfig& cfg, const RunOptions& opt = {});

/// Header: experiment,n,param,stream,<stats...>
std::string csv_header(const TrialRecord& r);
std::string csv_row(const TrialRecord& r);
/// Shortest round-trip decimal form, identical on every run.
std::string format_number(double x);

/// Per-cell means and standard errors of a run CSV, with a power-law fit
/// column for metrics named in fit_metrics. Throws FormatError on a bad schema.
std::string aggregate_csv(const std::string& csv, const std::vector<std::string>& fit_metrics = {"deficit_per_n"});
void emit_plot_data(const std::filesystem::path& csv, const std::filesystem::path& out);

/// SIGINT sets this flag; runners stop pulling trials and flush.
std::atomic<bool>& interrupt_flag();
void install_interrupt_handler();

} // namespace phaselab
