#include "randfield/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randfield/normal.hpp"
#include "randfield/parallel.hpp"

namespace randfield {

SumStatistics partial_sum(const FieldModel& model, const NoiseField& noise, const Domain& g) {
    if (g.empty()) throw std::invalid_argument("partial_sum: empty domain");
    if (g.dim() != model.dim()) throw std::invalid_argument("partial_sum: dimension mismatch");
    const auto& pts = g.points();
    SumStatistics stats;
    stats.value = par::block_sum(pts.size(), [&](std::size_t i) { return model.eval(noise, pts[i]); });
    stats.domain_size = g.size();
    return stats;
}

SumStatistics with_exact_variance(SumStatistics stats, const FieldModel& model, const Domain& g) {
    if (model.has_closed_forms()) stats.exact_variance = variance_exact(model, g);
    return stats;
}

double partial_sum_serial(const FieldModel& model, const NoiseField& noise, const Domain& g) {
    if (g.empty()) throw std::invalid_argument("partial_sum: empty domain");
    const auto& pts = g.points();
    return par::block_sum_serial(pts.size(),
                                 [&](std::size_t i) { return model.eval(noise, pts[i]); });
}

double variance_exact(const FieldModel& model, const Domain& g) {
    if (!model.has_closed_forms())
        throw std::invalid_argument("variance_exact: model has no closed-form covariances");
    if (g.dim() != model.dim()) throw std::invalid_argument("variance_exact: dimension mismatch");
    double total = 0.0;
    for (const auto& k : model.covariance_support()) {
        const std::size_t overlap = shift_overlap(g, k);
        if (overlap) total += static_cast<double>(overlap) * model.autocovariance_exact(k);
    }
    return total;
}

double weighted_variance_exact(const FieldModel& model, const Domain& g,
                               std::span<const double> weights) {
    if (!model.has_closed_forms())
        throw std::invalid_argument("weighted_variance_exact: model has no closed forms");
    if (weights.size() != g.size())
        throw std::invalid_argument("weighted_variance_exact: weight count mismatch");
    const auto& pts = g.points();
    // gamma has small finite support: accumulate over (i, lag) pairs.
    double total = 0.0;
    for (const auto& k : model.covariance_support()) {
        const double gamma = model.autocovariance_exact(k);
        if (gamma == 0.0) continue;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            // find j with pts[j] = pts[i] + k
            const LatticePoint target = pts[i] + k;
            auto it = std::lower_bound(pts.begin(), pts.end(), target);
            if (it != pts.end() && *it == target)
                total += weights[i] * weights[static_cast<std::size_t>(it - pts.begin())] * gamma;
        }
    }
    return total;
}

double sample_mean(const FieldModel& model, const NoiseField& noise, const Domain& g) {
    if (g.empty()) throw std::invalid_argument("sample_mean: empty domain");
    return partial_sum(model, noise, g).value / static_cast<double>(g.size());
}

double sample_autocovariance(const FieldModel& model, const NoiseField& noise, const Domain& g,
                             const LatticePoint& k) {
    const Domain xi = lag_set(g, k);
    if (xi.empty()) throw std::invalid_argument("sample_autocovariance: empty lag set");
    const auto& pts = xi.points();
    const double cross = par::block_sum(pts.size(), [&](std::size_t i) {
        return model.eval(noise, pts[i]) * model.eval(noise, pts[i] + k);
    });
    const double muhat = sample_mean(model, noise, g);
    return cross / static_cast<double>(xi.size()) - muhat * muhat;
}

ConfidenceInterval confidence_interval(double estimate, double longrun_variance,
                                       double n_effective, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval: level must be in (0,1)");
    if (longrun_variance < 0.0)
        throw std::invalid_argument("confidence_interval: negative variance");
    ConfidenceInterval ci;
    ci.level = level;
    if (longrun_variance == 0.0) {
        ci.degenerate = true;
        ci.lo = ci.hi = estimate;
        return ci;
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    ci.half_width = z * std::sqrt(longrun_variance / n_effective);
    ci.lo = estimate - ci.half_width;
    ci.hi = estimate + ci.half_width;
    return ci;
}

EstimationReport estimate_report(const FieldModel& model, const Domain& g,
                                 const std::vector<LatticePoint>& lags, double level,
                                 std::size_t replicates, std::uint64_t seed) {
    if (replicates == 0) throw std::invalid_argument("estimate_report: need replicates");
    EstimationReport report;
    report.domain_size = g.size();
    report.replicates = replicates;

    for (const auto& k : lags)
        if (lag_set(g, k).empty())
            throw std::invalid_argument("estimate_report: empty lag set at k = " + k.str());

    std::vector<double> means(replicates);
    std::vector<std::vector<double>> gammas(lags.size(), std::vector<double>(replicates));
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField noise{model.noise(), seed, r};
        means[r] = sample_mean(model, noise, g);
        for (std::size_t li = 0; li < lags.size(); ++li)
            gammas[li][r] = sample_autocovariance(model, noise, g, lags[li]);
    });

    auto mean_se = [](const std::vector<double>& v) {
        const double n = static_cast<double>(v.size());
        double m = 0.0;
        for (double x : v) m += x;
        m /= n;
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return std::pair<double, double>{m, se};
    };

    auto [mu, mu_se] = mean_se(means);
    report.mean = mu;
    report.mean_se = mu_se;
    // Long-run scale for the CI: exact when available, else the replicate
    // spread of muhat rescaled back to var(S)/|Gamma|.
    double lrv = model.has_closed_forms()
                     ? variance_exact(model, g) / static_cast<double>(g.size())
                     : mu_se * mu_se * static_cast<double>(replicates) *
                           static_cast<double>(g.size());
    report.mean_ci = confidence_interval(mu, lrv, static_cast<double>(g.size()), level);

    for (std::size_t li = 0; li < lags.size(); ++li) {
        LagEstimate le;
        le.lag = lags[li];
        le.xi_size = lag_set(g, lags[li]).size();
        auto [gm, gse] = mean_se(gammas[li]);
        le.gammahat = gm;
        le.se = gse;
        if (model.has_closed_forms()) le.exact = model.autocovariance_exact(lags[li]);
        report.lags.push_back(le);
    }
    return report;
}

}  // namespace randfield
