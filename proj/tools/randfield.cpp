// Command-line front end: builds an ExperimentConfig from flags (or loads a
// serialized one) and dispatches. Exit codes: 0 pass, 1 usage/config error,
// 2 verification failure.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "randfield/config.hpp"

using randfield::ExperimentConfig;

namespace {

void add_common(CLI::App* cmd, ExperimentConfig& config) {
    cmd->add_option("--model", config.model, "model descriptor (linear:iid, linear:2tap, "
                                             "linear:<file>, volterra:lag1, volterra:<file>, "
                                             "subordinated:<spec>:K=abs|tanh)");
    cmd->add_option("--noise", config.noise, "normal|rademacher|uniform|exponential");
    cmd->add_option("--seed", config.seed, "global seed; all randomness derives from it");
    cmd->add_option("--replicates", config.replicates, "Monte Carlo replicates");
    cmd->add_option("--out", config.out, "report JSON path (default: stdout)");
    cmd->add_option("--csv", config.csv, "optional CSV output path");
}

void add_domain(CLI::App* cmd, ExperimentConfig& config) {
    cmd->add_option("--shape", config.shape,
                    "domain descriptor, e.g. box:n=48,d=2 or lshape:arm=60,thick=24");
    cmd->add_option("--domain-file", config.domain_file, "domain file (dim=<d> header)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randfield: simulation and verification toolkit for stationary "
                 "random fields on the integer lattice"};
    app.require_subcommand(0, 1);

    ExperimentConfig config;
    std::string config_path;
    app.add_option("--config", config_path, "run a serialized experiment config");

    auto* simulate = app.add_subcommand("simulate", "one realization over a domain");
    add_common(simulate, config);
    add_domain(simulate, config);

    auto* dependence = app.add_subcommand("dependence", "physical dependence profile");
    add_common(dependence, config);
    dependence->add_option("--p", config.p, "norm order, p >= 2");
    dependence->add_option("--dim", config.dim, "lattice dimension");

    auto* estimate = app.add_subcommand("estimate", "mean and autocovariance estimates");
    add_common(estimate, config);
    add_domain(estimate, config);
    estimate->add_option("--lag", config.lags, "lag(s), comma-separated coordinates");
    estimate->add_option("--level", config.level, "confidence level in (0,1)");

    auto* vclt = app.add_subcommand("verify-clt", "CLT distances for S/sqrt(|Gamma|)");
    add_common(vclt, config);
    add_domain(vclt, config);
    vclt->add_option("--mode", config.mode, "exact|longrun|empirical standardization");
    vclt->add_option("--tolerance", config.tolerance, "Kolmogorov distance threshold");

    auto* vmom = app.add_subcommand("verify-moment", "moment-inequality battery");
    add_common(vmom, config);
    add_domain(vmom, config);
    vmom->add_option("--p", config.p, "norm order (2 or 4)");
    vmom->add_option("--cases", config.cases, "number of random weight vectors");

    auto* vvar = app.add_subcommand("verify-variance", "variance-ratio limit over boxes");
    add_common(vvar, config);
    vvar->add_option("--sizes", config.box_sizes, "box sizes, e.g. --sizes 8 16 32 64");
    vvar->add_option("--dim", config.dim, "lattice dimension");

    auto* vtrunc = app.add_subcommand("verify-truncation", "m-dependent truncation gap");
    add_common(vtrunc, config);
    add_domain(vtrunc, config);
    vtrunc->add_option("--m", config.m_values, "truncation radii, e.g. --m 0 1 2");

    auto* vac = app.add_subcommand("verify-autocov", "CLT for the autocovariance estimator");
    add_common(vac, config);
    add_domain(vac, config);
    vac->add_option("--lag", config.lags, "lag, comma-separated coordinates");
    vac->add_option("--tolerance", config.tolerance, "Kolmogorov distance threshold");

    auto* fclt = app.add_subcommand("fclt", "set-indexed smoothed sums: covariances or gap");
    add_common(fclt, config);
    fclt->add_option("--n", config.grid_n, "grid scale n");
    fclt->add_option("--pair", config.set_pairs,
                     "index-set pair 'A|B', e.g. 'quadrant:t=0.5,0.5|quadrant:t=0.75,0.75'");
    fclt->add_option("--gap-set", config.gap_set,
                     "single index set: run the discrete-vs-smoothed gap check");

    auto* vc = app.add_subcommand("vc-index", "brute-force VC index of a set family");
    vc->add_option("--family", config.family, "quadrant|rect");
    vc->add_option("--dim", config.vc_dim, "dimension (1 or 2)");
    vc->add_option("--seed", config.seed, "seed for randomized restarts");
    vc->add_option("--out", config.out, "report JSON path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            ExperimentConfig loaded = randfield::load_config_file(config_path);
            return randfield::run_to_files(loaded);
        }
        const auto subs = app.get_subcommands();
        if (subs.empty()) {
            std::cerr << app.help() << std::endl;
            return 1;
        }
        config.subcommand = subs[0]->get_name();
        return randfield::run_to_files(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
