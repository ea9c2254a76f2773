#include "randfield/config.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "randfield/dependence.hpp"
#include "randfield/estimation.hpp"
#include "randfield/fclt.hpp"
#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"
#include "randfield/normal.hpp"
#include "randfield/verify.hpp"

namespace randfield {

using nlohmann::json;

json config_to_json(const ExperimentConfig& c) {
    return json{{"subcommand", c.subcommand},
                {"model", c.model},
                {"noise", c.noise},
                {"seed", c.seed},
                {"dim", c.dim},
                {"shape", c.shape},
                {"domain_file", c.domain_file},
                {"replicates", c.replicates},
                {"p", c.p},
                {"lags", c.lags},
                {"m_values", c.m_values},
                {"box_sizes", c.box_sizes},
                {"level", c.level},
                {"tolerance", c.tolerance},
                {"mode", c.mode},
                {"cases", c.cases},
                {"grid_n", c.grid_n},
                {"set_pairs", c.set_pairs},
                {"gap_set", c.gap_set},
                {"family", c.family},
                {"vc_dim", c.vc_dim},
                {"out", c.out},
                {"csv", c.csv}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.model = j.value("model", c.model);
    c.noise = j.value("noise", c.noise);
    c.seed = j.value("seed", c.seed);
    c.dim = j.value("dim", c.dim);
    c.shape = j.value("shape", c.shape);
    c.domain_file = j.value("domain_file", c.domain_file);
    c.replicates = j.value("replicates", c.replicates);
    c.p = j.value("p", c.p);
    c.lags = j.value("lags", c.lags);
    c.m_values = j.value("m_values", c.m_values);
    c.box_sizes = j.value("box_sizes", c.box_sizes);
    c.level = j.value("level", c.level);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.mode = j.value("mode", c.mode);
    c.cases = j.value("cases", c.cases);
    c.grid_n = j.value("grid_n", c.grid_n);
    c.set_pairs = j.value("set_pairs", c.set_pairs);
    c.gap_set = j.value("gap_set", c.gap_set);
    c.family = j.value("family", c.family);
    c.vc_dim = j.value("vc_dim", c.vc_dim);
    c.out = j.value("out", c.out);
    c.csv = j.value("csv", c.csv);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    const std::string dump = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

LatticePoint parse_lag(const std::string& text, std::size_t dim) {
    LatticePoint p = LatticePoint::zero(dim);
    std::stringstream ss(text);
    std::string tok;
    std::size_t m = 0;
    while (std::getline(ss, tok, ',')) {
        if (m >= dim) throw std::invalid_argument("lag has too many coordinates: " + text);
        p[m++] = std::stoll(tok);
    }
    if (m != dim)
        throw std::invalid_argument("lag needs " + std::to_string(dim) + " coordinates: " + text);
    return p;
}

Domain resolve_domain(const ExperimentConfig& c) {
    if (!c.domain_file.empty()) return load_domain_file(c.domain_file);
    if (!c.shape.empty()) return make_domain(c.shape);
    throw std::invalid_argument("subcommand '" + c.subcommand +
                                "' needs --shape or --domain-file");
}

std::string domain_descriptor(const ExperimentConfig& c) {
    return !c.domain_file.empty() ? "file:" + c.domain_file : c.shape;
}

json clt_to_json(const CLTReport& r) {
    return json{{"domain", r.domain_descriptor},
                {"domain_size", r.domain_size},
                {"replicates", r.replicates},
                {"mode", to_string(r.mode)},
                {"comparison_variance", r.comparison_variance},
                {"kolmogorov", r.kolmogorov},
                {"levy", r.levy},
                {"tolerance", r.tolerance},
                {"degenerate", r.degenerate},
                {"pass", r.pass}};
}

struct RunOutput {
    json results;
    bool has_pass = false;
    bool pass = true;
    std::string csv_text;
};

RunOutput dispatch(const ExperimentConfig& c) {
    RunOutput out;
    const NoiseSpec noise = NoiseSpec::parse(c.noise);

    if (c.subcommand == "simulate") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        NoiseField field{noise, c.seed, 0};
        const SumStatistics s = with_exact_variance(partial_sum(model, field, g), model, g);
        out.results = {{"domain", domain_descriptor(c)},
                       {"domain_size", s.domain_size},
                       {"sum", s.value},
                       {"mean", s.value / static_cast<double>(s.domain_size)}};
        if (s.exact_variance) out.results["exact_variance"] = *s.exact_variance;
        std::ostringstream csv;
        csv.precision(17);
        csv << "site,value\n";
        for (const auto& p : g.points())
            csv << '"' << p.str() << "\"," << model.eval(field, p) << '\n';
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "dependence") {
        const FieldModel model = FieldModel::parse(c.model, c.dim, noise);
        DependenceProfile profile = profile_monte_carlo(model, c.p, c.replicates, c.seed);
        const bool linear = model.kind() == FieldModel::Kind::Linear;
        json rows = json::array();
        std::ostringstream csv;
        csv.precision(17);
        csv << "site,method,p,estimate,se,analytic\n";
        for (const auto& [site, est] : profile.entries) {
            json row{{"site", site.str()},
                     {"method", est.method == DeltaMethod::Analytic ? "analytic" : "monte-carlo"},
                     {"p", c.p},
                     {"estimate", est.value},
                     {"se", est.se}};
            csv << '"' << site.str() << "\","
                << (est.method == DeltaMethod::Analytic ? "analytic" : "monte-carlo") << ','
                << c.p << ',' << est.value << ',' << est.se << ',';
            if (linear) {
                double a = delta_analytic_linear(model.linear_kernel(), noise, site, c.p);
                row["analytic"] = a;
                csv << a;
            }
            csv << '\n';
            rows.push_back(row);
        }
        const DeltaEstimate total = profile.stability_sum();
        out.results = {{"p", c.p},
                       {"entries", rows},
                       {"stability_sum", total.value},
                       {"stability_sum_se", total.se}};
        if (linear)
            out.results["stability_sum_analytic"] =
                profile_analytic_linear(model.linear_kernel(), noise, c.p)
                    .stability_sum()
                    .value;
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "estimate") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        std::vector<LatticePoint> lags;
        for (const auto& text : c.lags) lags.push_back(parse_lag(text, g.dim()));
        const EstimationReport r =
            estimate_report(model, g, lags, c.level, c.replicates, c.seed);
        const double z = normal_quantile(0.5 * (1.0 + c.level));
        json rows = json::array();
        std::ostringstream csv;
        csv.precision(17);
        csv << "lag,xi_size,gammahat,exact,se,ci_lo,ci_hi\n";
        for (const auto& le : r.lags) {
            json row{{"lag", le.lag.str()},
                     {"xi_size", le.xi_size},
                     {"gammahat", le.gammahat},
                     {"se", le.se},
                     {"ci_lo", le.gammahat - z * le.se},
                     {"ci_hi", le.gammahat + z * le.se}};
            if (le.exact) row["exact"] = *le.exact;
            rows.push_back(row);
            csv << '"' << le.lag.str() << "\"," << le.xi_size << ',' << le.gammahat << ',';
            if (le.exact) csv << *le.exact;
            csv << ',' << le.se << ',' << le.gammahat - z * le.se << ','
                << le.gammahat + z * le.se << '\n';
        }
        out.results = {{"domain", domain_descriptor(c)},
                       {"domain_size", r.domain_size},
                       {"replicates", r.replicates},
                       {"mean", r.mean},
                       {"mean_se", r.mean_se},
                       {"mean_ci",
                        {{"lo", r.mean_ci.lo},
                         {"hi", r.mean_ci.hi},
                         {"level", r.mean_ci.level},
                         {"degenerate", r.mean_ci.degenerate}}},
                       {"lags", rows}};
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "verify-clt") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        StandardizationMode mode = parse_mode(c.mode);
        if (!model.has_closed_forms() && mode != StandardizationMode::Empirical)
            mode = StandardizationMode::Empirical;
        CLTReport r = clt_experiment(model, g, c.replicates, c.seed, mode, c.tolerance);
        r.domain_descriptor = domain_descriptor(c);
        out.results = clt_to_json(r);
        out.has_pass = true;
        out.pass = r.pass;
        std::ostringstream csv;
        csv.precision(17);
        csv << "statistic\n";
        for (double v : r.statistics) csv << v << '\n';
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "verify-moment") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        const MomentReport r =
            moment_inequality_battery(model, g, c.p, c.cases, c.replicates, c.seed);
        json rows = json::array();
        for (const auto& mc : r.cases) {
            json row{{"case", mc.index},
                     {"weight_sq_sum", mc.weight_sq_sum},
                     {"bound", mc.bound},
                     {"estimate", mc.estimate},
                     {"se", mc.se},
                     {"violation", mc.violation}};
            if (mc.exact) {
                row["exact"] = *mc.exact;
                row["exact_violation"] = mc.exact_violation;
            }
            rows.push_back(row);
        }
        out.results = {{"p", r.p},
                       {"delta_p", r.delta_p},
                       {"replicates", r.replicates},
                       {"cases", rows},
                       {"violations", r.violations},
                       {"exact_violations", r.exact_violations},
                       {"pass", r.pass}};
        out.has_pass = true;
        out.pass = r.pass;
        std::ostringstream csv;
        csv.precision(17);
        csv << "case,weight_sq_sum,estimate,se,bound,exact\n";
        for (const auto& mc : r.cases) {
            csv << mc.index << ',' << mc.weight_sq_sum << ',' << mc.estimate << ',' << mc.se
                << ',' << mc.bound << ',';
            if (mc.exact) csv << *mc.exact;
            csv << '\n';
        }
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "verify-variance") {
        const FieldModel model = FieldModel::parse(c.model, c.dim, noise);
        std::vector<long long> sizes = c.box_sizes;
        if (sizes.empty()) sizes = {8, 16, 32, 64};
        const VarianceLimitReport r = variance_limit_check(model, sizes);
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back(
                {{"n", row.n}, {"ratio", row.ratio}, {"rel_error", row.rel_error}});
        out.results = {{"limit", r.limit},
                       {"rows", rows},
                       {"decreasing", r.decreasing},
                       {"degenerate", r.degenerate},
                       {"pass", r.pass}};
        out.has_pass = true;
        out.pass = r.pass;
        std::ostringstream csv;
        csv.precision(17);
        csv << "n,ratio,rel_error\n";
        for (const auto& row : r.rows)
            csv << row.n << ',' << row.ratio << ',' << row.rel_error << '\n';
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "verify-truncation") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        std::vector<Coord> ms(c.m_values.begin(), c.m_values.end());
        if (ms.empty()) ms = {0, 1, 2};
        const TruncationReport r = truncation_gap_check(model, g, ms, c.replicates, c.seed);
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"m", row.m}, {"gap", row.gap}, {"se", row.se}});
        out.results = {{"sigma", r.sigma},
                       {"rows", rows},
                       {"zero_at_full_window", r.zero_at_full_window},
                       {"nonincreasing", r.nonincreasing},
                       {"pass", r.pass}};
        out.has_pass = true;
        out.pass = r.pass;
        std::ostringstream csv;
        csv.precision(17);
        csv << "m,gap,se\n";
        for (const auto& row : r.rows) csv << row.m << ',' << row.gap << ',' << row.se << '\n';
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "verify-autocov") {
        const Domain g = resolve_domain(c);
        const FieldModel model = FieldModel::parse(c.model, g.dim(), noise);
        if (c.lags.size() != 1)
            throw std::invalid_argument("verify-autocov needs exactly one --lag");
        const LatticePoint k = parse_lag(c.lags[0], g.dim());
        const AutocovCLTReport r =
            autocov_clt_experiment(model, g, k, c.replicates, c.seed, c.tolerance);
        out.results = {{"lag", r.lag.str()},
                       {"xi_size", r.xi_size},
                       {"replicates", r.replicates},
                       {"gamma_exact", r.gamma_exact},
                       {"gamma_mean", r.gamma_mean},
                       {"gamma_se", r.gamma_se},
                       {"comparison_variance", r.comparison_variance},
                       {"kolmogorov", r.kolmogorov},
                       {"levy", r.levy},
                       {"tolerance", r.tolerance},
                       {"degenerate", r.degenerate},
                       {"pass", r.pass}};
        out.has_pass = true;
        out.pass = r.pass && !r.degenerate;
        std::ostringstream csv;
        csv.precision(17);
        csv << "statistic\n";
        for (double v : r.statistics) csv << v << '\n';
        out.csv_text = csv.str();
        return out;
    }

    if (c.subcommand == "fclt") {
        if (!c.gap_set.empty()) {
            const IndexSet a = IndexSet::parse(c.gap_set);
            const FieldModel model = FieldModel::parse(c.model, a.dim(), noise);
            const GapReport r =
                discrete_smoothed_gap(model, a, c.grid_n, c.replicates, c.seed);
            out.results = {{"set", a.str()},
                           {"n", r.n},
                           {"replicates", r.replicates},
                           {"boundary_cells", r.boundary_cells},
                           {"lattice_points", r.lattice_points},
                           {"lambda", r.lambda},
                           {"gap", r.gap},
                           {"se", r.se},
                           {"bound", r.bound},
                           {"within_bound", r.within_bound},
                           {"counting_ok", r.counting_ok}};
            out.has_pass = true;
            out.pass = r.within_bound && r.counting_ok;
            return out;
        }
        if (c.set_pairs.empty())
            throw std::invalid_argument("fclt needs --pair entries or --gap-set");
        std::vector<std::pair<IndexSet, IndexSet>> pairs;
        for (const auto& text : c.set_pairs) {
            auto bar = text.find('|');
            if (bar == std::string::npos)
                throw std::invalid_argument("pair needs 'A|B' format: " + text);
            pairs.emplace_back(IndexSet::parse(text.substr(0, bar)),
                               IndexSet::parse(text.substr(bar + 1)));
        }
        const FieldModel model = FieldModel::parse(c.model, pairs[0].first.dim(), noise);
        const CovarianceReport r =
            fd_covariance_check(model, c.grid_n, pairs, c.replicates, c.seed);
        json rows = json::array();
        for (const auto& pr : r.pairs)
            rows.push_back({{"a", pr.a.str()},
                            {"b", pr.b.str()},
                            {"lambda_intersection", pr.lambda_intersection},
                            {"target", pr.target},
                            {"empirical", pr.empirical},
                            {"se", pr.se},
                            {"pass", pr.pass}});
        out.results = {{"n", r.n},
                       {"replicates", r.replicates},
                       {"sigma2", r.sigma2},
                       {"pairs", rows},
                       {"pass", r.pass}};
        out.has_pass = true;
        out.pass = r.pass;
        return out;
    }

    if (c.subcommand == "vc-index") {
        const IndexSet::Kind kind = c.family == "quadrant" ? IndexSet::Kind::Quadrant
                                  : c.family == "rect"     ? IndexSet::Kind::Rectangle
                                                           : throw std::invalid_argument(
                                                                 "family must be quadrant|rect");
        VcProbeConfig probe;
        probe.seed = c.seed;
        const VcResult r = vc_index(kind, c.vc_dim, probe);
        const SetCollection family{kind, static_cast<std::size_t>(c.vc_dim), {}};
        const int declared = family.declared_vc_index();
        out.results = {{"family", c.family},
                       {"dim", c.vc_dim},
                       {"index", r.index},
                       {"certified", r.certified},
                       {"probes", r.probes},
                       {"declared", declared},
                       {"matches_declared", r.index == declared}};
        out.has_pass = true;
        out.pass = r.index == declared;
        return out;
    }

    throw std::invalid_argument("unknown subcommand: " + c.subcommand);
}

std::string timestamp_utc() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

json run_report(const ExperimentConfig& config) {
    RunOutput out = dispatch(config);
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    json report{{"tool", "randfield"},
                {"version", "1.0.0"},
                {"subcommand", config.subcommand},
                {"config", config_to_json(config)},
                {"config_hash", hash},
                {"seed", config.seed},
                {"results", out.results},
                {"timestamp", timestamp_utc()}};
    if (out.has_pass) report["pass"] = out.pass;
    if (!out.csv_text.empty()) report["_csv"] = out.csv_text;  // stripped before writing
    return report;
}

namespace {

int finish(json report, std::ostream& stream, const std::string& csv_path) {
    std::string csv_text;
    if (report.contains("_csv")) {
        csv_text = report["_csv"].get<std::string>();
        report.erase("_csv");
    }
    stream << report.dump(2) << '\n';
    if (!csv_path.empty() && !csv_text.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write csv file: " + csv_path);
        csv << csv_text;
    }
    if (report.contains("pass") && !report["pass"].get<bool>()) return 2;
    return 0;
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& report_stream) {
    return finish(run_report(config), report_stream, config.csv);
}

int run_to_files(const ExperimentConfig& config) {
    json report = run_report(config);
    if (config.out.empty()) return finish(std::move(report), std::cout, config.csv);
    std::ofstream out(config.out);
    if (!out) throw std::runtime_error("cannot write report file: " + config.out);
    return finish(std::move(report), out, config.csv);
}

}  // namespace randfield
