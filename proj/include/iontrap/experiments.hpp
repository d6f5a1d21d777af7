// experiments.hpp — run configurations, the named batch experiments and the
// tables they produce

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iontrap/operators.hpp"
#include "iontrap/params.hpp"

namespace iontrap {

/// Parsed run configuration. Sections [params], [space], [experiment]; the
/// params section holds either the laser set (omega_ge, omega_L, Omega_R,
/// eta) or the reduced set (delta_breve, eta_breve, lambda), nu in both.
struct RunConfig {
    std::optional<ModelParams> model;
    std::optional<BhParams> reduced;
    SpaceConfig space;
    std::string experiment;
    std::map<std::string, std::string> options;  // [experiment] minus name
    std::map<std::string, std::string> echo;     // every key as read, "section.key"

    /// The reduced set, derived from the laser set when that is what was given.
    BhParams bh_params() const;
    /// Throws ConfigError when the laser set is absent.
    const ModelParams& require_model() const;

    bool has(const std::string& key) const { return options.count(key) != 0; }
    double real(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    /// Whitespace- or comma-separated list.
    std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
};

/// Throws ConfigError on anything malformed, missing or unknown.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

struct Column {
    std::string name;
    std::vector<double> values;
};

struct ResultTable {
    std::string name;
    std::vector<Column> columns;

    void add(std::string column, std::vector<double> values);
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }
    /// Header row, then one line per row; %.17g, LF endings.
    std::string csv() const;
};

struct RunResult {
    std::string experiment;
    std::vector<ResultTable> tables;
    std::map<std::string, double> summary;
    /// Failed self-checks and inconclusive fits, each naming what failed.
    std::vector<std::string> diagnostics;
};

const std::vector<std::string>& experiment_names();

/// Runs cfg.experiment. Grid points are spread over `threads` workers; the
/// output does not depend on the thread count.
RunResult run_experiment(const RunConfig& cfg, int threads = 1);

/// Writes <experiment>.json and <experiment>_<table>.csv into out_dir, each
/// through a temporary file and a rename.
void write_outputs(const RunConfig& cfg, const RunResult& result, const std::filesystem::path& out_dir);

}  // namespace iontrap
