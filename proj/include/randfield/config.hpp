#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace randfield {

/// Full description of one experiment run. Serializable; re-running a
/// serialized config reproduces every report byte-identically (timestamp
/// aside), regardless of the worker count.
struct ExperimentConfig {
    std::string subcommand;
    std::string model = "linear:iid";
    std::string noise = "normal";
    std::uint64_t seed = 1;
    std::size_t dim = 2;  // lattice dimension when no domain is given
    std::string shape;
    std::string domain_file;
    std::size_t replicates = 5000;
    double p = 2.0;
    std::vector<std::string> lags;       // "1,0" style
    std::vector<long long> m_values;
    std::vector<long long> box_sizes;
    double level = 0.95;
    double tolerance = 0.03;
    std::string mode = "exact";
    std::size_t cases = 100;
    long long grid_n = 32;
    std::vector<std::string> set_pairs;  // "A|B" index-set pairs
    std::string gap_set;                 // nonempty switches fclt to the gap check
    std::string family = "quadrant";
    int vc_dim = 1;
    std::string out;
    std::string csv;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

/// FNV-1a over the canonical serialized config.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Builds the full report (config + provenance + results + pass flag).
/// Deterministic except for the "timestamp" field.
nlohmann::json run_report(const ExperimentConfig& config);

/// Dispatches, writes the report (and optional CSV), returns the exit code:
/// 0 pass, 2 verification failure. Usage errors throw.
int run(const ExperimentConfig& config, std::ostream& report_stream);
int run_to_files(const ExperimentConfig& config);

}  // namespace randfield
