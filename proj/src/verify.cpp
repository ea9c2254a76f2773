#include "randfield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randfield/dependence.hpp"
#include "randfield/normal.hpp"
#include "randfield/parallel.hpp"

namespace randfield {

namespace {

// Delta_p for the moment bound: exact for linear kernels, Monte Carlo with a
// derived stream otherwise.
double stability_sum_for_check(const FieldModel& model, double p, std::uint64_t seed) {
    return stability_sum(model, p, 4000, detail::mix64(seed ^ 0xb0d7ull)).value;
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.size() < 2)
        throw std::invalid_argument("EmpiricalDistribution: need at least 2 values");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::cdf_left(double x) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

double EmpiricalDistribution::variance() const {
    const double m = mean();
    double ss = 0.0;
    for (double v : values_) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values_.size() - 1);
}

double kolmogorov_distance(const EmpiricalDistribution& emp, NormalComparison cmp) {
    if (cmp.var <= 0.0) throw std::invalid_argument("kolmogorov_distance: var must be positive");
    const auto& v = emp.values();
    const double n = static_cast<double>(v.size());
    double dist = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        const double g = normal_cdf(v[i], cmp.mean, cmp.var);
        const double f_hi = static_cast<double>(j + 1) / n;
        const double f_lo = static_cast<double>(i) / n;
        dist = std::max({dist, f_hi - g, g - f_lo});
        i = j + 1;
    }
    return dist;
}

namespace {

// Right-continuous CDF of the comparison law and its left limit.
double cmp_cdf(NormalComparison cmp, double x) {
    if (cmp.var == 0.0) return x < cmp.mean ? 0.0 : 1.0;
    return normal_cdf(x, cmp.mean, cmp.var);
}

double cmp_cdf_left(NormalComparison cmp, double x) {
    if (cmp.var == 0.0) return x <= cmp.mean ? 0.0 : 1.0;
    return normal_cdf(x, cmp.mean, cmp.var);
}

}  // namespace

double levy_distance(const EmpiricalDistribution& emp, NormalComparison cmp) {
    if (cmp.var < 0.0) throw std::invalid_argument("levy_distance: negative variance");
    const auto& v = emp.values();
    const double n = static_cast<double>(v.size());

    std::vector<double> grid;
    if (cmp.var > 0.0) {
        grid.reserve(4096);
        const double sd = std::sqrt(cmp.var);
        for (int j = 0; j < 4096; ++j)
            grid.push_back(cmp.mean + sd * normal_quantile((j + 0.5) / 4096.0));
    } else {
        grid.push_back(cmp.mean);
    }

    auto satisfied = [&](double eps) {
        // Both one-sided conditions at the empirical jump points; duplicates
        // collapse to one check with the correct upper/lower step levels.
        std::size_t i = 0;
        while (i < v.size()) {
            std::size_t j = i;
            while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
            const double f_hi = static_cast<double>(j + 1) / n;
            const double f_lo = static_cast<double>(i) / n;
            if (f_hi > cmp_cdf(cmp, v[i] + eps) + eps) return false;
            if (cmp_cdf_left(cmp, v[i] - eps) - eps > f_lo) return false;
            i = j + 1;
        }
        // Sweep of the comparison quantile grid (this is what catches the
        // jumps of a point-mass comparison).
        for (double q : grid) {
            if (emp.cdf_left(q - eps) > cmp_cdf_left(cmp, q) + eps) return false;
            if (cmp_cdf(cmp, q) - eps > emp.cdf(q + eps)) return false;
        }
        return true;
    };

    double hi = cmp.var > 0.0 ? kolmogorov_distance(emp, cmp) : 1.0;
    if (satisfied(0.0)) return 0.0;
    double lo = 0.0;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (satisfied(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::string to_string(StandardizationMode mode) {
    switch (mode) {
        case StandardizationMode::ExactSigma:
            return "exact";
        case StandardizationMode::Longrun:
            return "longrun";
        case StandardizationMode::Empirical:
            return "empirical";
    }
    return "?";
}

StandardizationMode parse_mode(const std::string& name) {
    if (name == "exact") return StandardizationMode::ExactSigma;
    if (name == "longrun") return StandardizationMode::Longrun;
    if (name == "empirical") return StandardizationMode::Empirical;
    throw std::invalid_argument("unknown standardization mode: " + name);
}

CLTReport clt_experiment(const FieldModel& model, const Domain& g, std::size_t replicates,
                         std::uint64_t seed, StandardizationMode mode, double tolerance) {
    if (replicates < 2) throw std::invalid_argument("clt_experiment: need >= 2 replicates");
    if (g.empty()) throw std::invalid_argument("clt_experiment: empty domain");

    const double sqrt_size = std::sqrt(static_cast<double>(g.size()));
    std::vector<double> stats(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField noise{model.noise(), seed, r};
        stats[r] = partial_sum_serial(model, noise, g) / sqrt_size;
    });
    EmpiricalDistribution emp(std::move(stats));

    CLTReport report;
    report.domain_size = g.size();
    report.replicates = replicates;
    report.mode = mode;
    report.tolerance = tolerance;

    double v = 0.0;
    switch (mode) {
        case StandardizationMode::ExactSigma:
            v = variance_exact(model, g) / static_cast<double>(g.size());
            break;
        case StandardizationMode::Longrun:
            v = model.longrun_variance_exact();
            break;
        case StandardizationMode::Empirical:
            v = emp.variance();
            break;
    }
    report.comparison_variance = v;
    if (v <= 0.0) {
        report.degenerate = true;
        report.statistics = emp.values();
        return report;
    }
    report.kolmogorov = kolmogorov_distance(emp, {0.0, v});
    report.levy = levy_distance(emp, {0.0, v});
    if (report.levy > report.kolmogorov + 1e-9)
        throw std::logic_error("clt_experiment: Levy distance exceeds Kolmogorov");
    report.pass = report.kolmogorov < tolerance;
    report.statistics = emp.values();
    return report;
}

namespace {

MomentCase run_moment_case(const FieldModel& model, const Domain& g,
                           const std::vector<double>& weights, double p, double delta_p,
                           std::size_t replicates, std::uint64_t seed, std::size_t index) {
    const auto& pts = g.points();
    std::vector<double> abs_p(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField noise{model.noise(), seed, r};
        double s = par::block_sum_serial(
            pts.size(), [&](std::size_t i) { return weights[i] * model.eval(noise, pts[i]); });
        abs_p[r] = std::pow(std::abs(s), p);
    });
    double total = 0.0;
    for (double x : abs_p) total += x;
    const double n = static_cast<double>(replicates);
    MomentCase mc;
    mc.index = index;
    for (double w : weights) mc.weight_sq_sum += w * w;
    mc.bound = std::sqrt(2.0 * p * mc.weight_sq_sum) * delta_p;
    mc.estimate = std::pow(total / n, 1.0 / p);
    // delete-one jackknife for the p-norm
    std::vector<double> loo(replicates);
    double loo_mean = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
        loo[r] = std::pow((total - abs_p[r]) / (n - 1.0), 1.0 / p);
        loo_mean += loo[r];
    }
    loo_mean /= n;
    double ss = 0.0;
    for (double x : loo) ss += (x - loo_mean) * (x - loo_mean);
    mc.se = std::sqrt(ss * (n - 1.0) / n);

    if (p == 2.0 && model.has_closed_forms()) {
        mc.exact = std::sqrt(weighted_variance_exact(model, g, weights));
        mc.exact_violation = *mc.exact > mc.bound * (1.0 + 1e-12);
    }
    mc.violation = mc.estimate - 3.0 * mc.se > mc.bound;
    return mc;
}

}  // namespace

MomentReport moment_inequality_check(const FieldModel& model, const Domain& g,
                                     const std::vector<double>& weights, double p,
                                     std::size_t replicates, std::uint64_t seed) {
    if (weights.size() != g.size())
        throw std::invalid_argument("moment_inequality_check: weight count mismatch");
    MomentReport report;
    report.p = p;
    report.replicates = replicates;
    report.delta_p = stability_sum_for_check(model, p, seed);
    report.cases.push_back(
        run_moment_case(model, g, weights, p, report.delta_p, replicates, seed, 0));
    report.violations = report.cases[0].violation ? 1 : 0;
    report.exact_violations = report.cases[0].exact_violation ? 1 : 0;
    report.pass = report.violations == 0 && report.exact_violations == 0;
    return report;
}

MomentReport moment_inequality_battery(const FieldModel& model, const Domain& g, double p,
                                       std::size_t cases, std::size_t replicates,
                                       std::uint64_t seed) {
    MomentReport report;
    report.p = p;
    report.replicates = replicates;
    report.delta_p = stability_sum_for_check(model, p, seed);
    const auto& pts = g.points();
    for (std::size_t c = 0; c < cases; ++c) {
        std::vector<double> weights(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double u = detail::to_unit(detail::counter_bits(
                seed, detail::kStreamWeights, c * pts.size() + i));
            weights[i] = 2.0 * u - 1.0;
        }
        // distinct replicate stream per case
        report.cases.push_back(run_moment_case(model, g, weights, p, report.delta_p, replicates,
                                               seed + 0x10001ull * (c + 1), c));
    }
    for (const auto& mc : report.cases) {
        report.violations += mc.violation ? 1 : 0;
        report.exact_violations += mc.exact_violation ? 1 : 0;
    }
    report.pass = report.violations == 0 && report.exact_violations == 0;
    return report;
}

VarianceLimitReport variance_limit_check(const FieldModel& model,
                                         const std::vector<long long>& box_sizes) {
    if (box_sizes.empty()) throw std::invalid_argument("variance_limit_check: no box sizes");
    VarianceLimitReport report;
    report.limit = model.longrun_variance_exact();
    if (report.limit == 0.0) {
        report.degenerate = true;
        return report;
    }
    const auto d = model.dim();
    for (long long n : box_sizes) {
        Domain box = make_domain("box:n=" + std::to_string(n) + ",d=" + std::to_string(d));
        VarianceLimitRow row;
        row.n = n;
        row.ratio = variance_exact(model, box) / static_cast<double>(box.size());
        row.rel_error = std::abs(row.ratio / report.limit - 1.0);
        report.rows.push_back(row);
    }
    // strict decrease required except where the ratio is already exact
    report.decreasing = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const double prev = report.rows[i - 1].rel_error;
        const double cur = report.rows[i].rel_error;
        if (prev <= 1e-15 ? cur > 1e-15 : cur >= prev) report.decreasing = false;
    }
    report.pass = report.decreasing;
    return report;
}

TruncationReport truncation_gap_check(const FieldModel& model, const Domain& g,
                                      const std::vector<Coord>& m_values, std::size_t replicates,
                                      std::uint64_t seed) {
    if (m_values.empty()) throw std::invalid_argument("truncation_gap_check: no m values");
    TruncationReport report;
    const auto& pts = g.points();
    report.sigma = model.has_closed_forms() ? std::sqrt(variance_exact(model, g)) : 0.0;
    if (report.sigma == 0.0 && model.has_closed_forms())
        throw std::invalid_argument("truncation_gap_check: degenerate sigma");

    // Empirical sigma for models without closed forms, shared replicate seeds.
    if (!model.has_closed_forms()) {
        std::vector<double> sums(replicates);
        par::parallel_index(replicates, [&](std::size_t r) {
            NoiseField noise{model.noise(), seed, r};
            sums[r] = partial_sum_serial(model, noise, g);
        });
        double ss = 0.0;
        for (double s : sums) ss += s * s;
        report.sigma = std::sqrt(ss / static_cast<double>(replicates));
    }

    for (Coord m : m_values) {
        const TruncatedField truncated(model, m);
        std::vector<double> sq(replicates);
        par::parallel_index(replicates, [&](std::size_t r) {
            NoiseField noise{model.noise(), seed, r};
            double gap = par::block_sum_serial(pts.size(), [&](std::size_t i) {
                return model.eval(noise, pts[i]) - truncated.eval(noise, pts[i]);
            });
            sq[r] = gap * gap;
        });
        double total = 0.0;
        for (double x : sq) total += x;
        const double n = static_cast<double>(replicates);
        const double msq = total / n;
        TruncationRow row;
        row.m = m;
        row.gap = std::sqrt(msq) / report.sigma;
        double var = 0.0;
        for (double x : sq) var += (x - msq) * (x - msq);
        var /= n * (n - 1.0);
        // delta method through sqrt
        row.se = msq > 0.0 ? std::sqrt(var) / (2.0 * std::sqrt(msq) * report.sigma) : 0.0;
        report.rows.push_back(row);

        if (model.kind() != FieldModel::Kind::Subordinated && m >= model.window_radius() &&
            row.gap != 0.0)
            report.zero_at_full_window = false;
    }
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (report.rows[i].gap > report.rows[i - 1].gap + 1e-12) report.nonincreasing = false;
    report.pass = report.zero_at_full_window && report.nonincreasing;
    return report;
}

AutocovCLTReport autocov_clt_experiment(const FieldModel& model, const Domain& g,
                                        const LatticePoint& k, std::size_t replicates,
                                        std::uint64_t seed, double tolerance) {
    const Domain xi = lag_set(g, k);
    if (xi.empty()) throw std::invalid_argument("autocov_clt_experiment: empty lag set");
    if (replicates < 2) throw std::invalid_argument("autocov_clt_experiment: need replicates");

    AutocovCLTReport report;
    report.lag = k;
    report.xi_size = xi.size();
    report.replicates = replicates;
    report.tolerance = tolerance;
    report.gamma_exact = model.autocovariance_exact(k);

    std::vector<double> gammas(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField noise{model.noise(), seed, r};
        gammas[r] = sample_autocovariance(model, noise, g, k);
    });
    const double n = static_cast<double>(replicates);
    double gm = 0.0;
    for (double x : gammas) gm += x;
    gm /= n;
    double gss = 0.0;
    for (double x : gammas) gss += (x - gm) * (x - gm);
    report.gamma_mean = gm;
    report.gamma_se = std::sqrt(gss / (n - 1.0) / n);

    const double scale = std::sqrt(static_cast<double>(xi.size()));
    std::vector<double> stats(replicates);
    for (std::size_t r = 0; r < replicates; ++r)
        stats[r] = scale * (gammas[r] - report.gamma_exact);
    EmpiricalDistribution emp(std::move(stats));
    const double v = emp.variance();
    report.comparison_variance = v;
    if (v <= 0.0) {
        report.degenerate = true;
        report.statistics = emp.values();
        return report;
    }
    report.kolmogorov = kolmogorov_distance(emp, {0.0, v});
    report.levy = levy_distance(emp, {0.0, v});
    if (report.levy > report.kolmogorov + 1e-9)
        throw std::logic_error("autocov_clt_experiment: Levy distance exceeds Kolmogorov");
    report.pass = report.kolmogorov < tolerance;
    report.statistics = emp.values();
    return report;
}

}  // namespace randfield
