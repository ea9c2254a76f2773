#include "randfield/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "randfield/parallel.hpp"

namespace randfield {

double OrliczSpec::shift() const {
    if (beta <= 0.0) throw std::invalid_argument("orlicz: beta must be positive");
    if (beta < 1.0) return std::pow((1.0 - beta) / beta, 1.0 / beta);
    return 0.0;
}

double OrliczSpec::psi(double x) const {
    const double h = shift();
    return std::exp(std::pow(x + h, beta)) - std::exp(std::pow(h, beta));
}

double delta_analytic_linear(const LinearKernel& kernel, const NoiseSpec& noise,
                             const LatticePoint& i, double p) {
    return std::abs(kernel.coeff_at(i)) * noise.diff_pnorm(p);
}

namespace {

// Empirical p-norm (mean of |D|^p, then p-th root) with delete-one jackknife.
DeltaEstimate pnorm_with_jackknife(const std::vector<double>& abs_p, double p) {
    const std::size_t n = abs_p.size();
    double total = 0.0;
    for (double v : abs_p) total += v;
    if (total == 0.0) return {0.0, 0.0, DeltaMethod::MonteCarlo};
    const double estimate = std::pow(total / static_cast<double>(n), 1.0 / p);

    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        loo[j] = std::pow((total - abs_p[j]) / static_cast<double>(n - 1), 1.0 / p);
        loo_mean += loo[j];
    }
    loo_mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    const double se = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
    return {estimate, se, DeltaMethod::MonteCarlo};
}

}  // namespace

DeltaEstimate delta_monte_carlo(const FieldModel& model, const LatticePoint& i, double p,
                                std::size_t replicates, std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("delta_monte_carlo: need >= 2 replicates");
    if (p < 2.0 || std::isinf(p))
        throw std::invalid_argument("delta_monte_carlo: p must be finite and >= 2");
    if (i.norm_inf() > model.window_radius()) return {0.0, 0.0, DeltaMethod::MonteCarlo};

    std::vector<double> abs_p(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField field{model.noise(), seed, r};
        CoupledNoise coupled = couple(field, seed);
        double d = model.eval(field, i) - model.eval(coupled, i);
        abs_p[r] = std::pow(std::abs(d), p);
    });
    return pnorm_with_jackknife(abs_p, p);
}

DeltaEstimate delta_truncated(const FieldModel& model, Coord m, const LatticePoint& i, double p,
                              std::size_t replicates, std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("delta_truncated: need >= 2 replicates");
    if (i.norm_inf() > model.window_radius()) return {0.0, 0.0, DeltaMethod::MonteCarlo};
    if (model.kind() != FieldModel::Kind::Subordinated && m >= model.window_radius())
        return {0.0, 0.0, DeltaMethod::MonteCarlo};

    const TruncatedField truncated(model, m);
    std::vector<double> abs_p(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField field{model.noise(), seed, r};
        CoupledNoise coupled = couple(field, seed);
        double resid = model.eval(field, i) - truncated.eval(field, i);
        double resid_star = model.eval(coupled, i) - truncated.eval(coupled, i);
        abs_p[r] = std::pow(std::abs(resid - resid_star), p);
    });
    return pnorm_with_jackknife(abs_p, p);
}

DeltaEstimate DependenceProfile::stability_sum() const {
    DeltaEstimate total{0.0, 0.0, DeltaMethod::Analytic};
    double var = 0.0;
    for (const auto& [site, est] : entries) {
        total.value += est.value;
        var += est.se * est.se;
        if (est.method == DeltaMethod::MonteCarlo) total.method = DeltaMethod::MonteCarlo;
    }
    total.se = std::sqrt(var);
    return total;
}

DeltaEstimate DependenceProfile::at(const LatticePoint& i) const {
    for (const auto& [site, est] : entries)
        if (site == i) return est;
    return {0.0, 0.0, DeltaMethod::Analytic};
}

DependenceProfile profile_analytic_linear(const LinearKernel& kernel, const NoiseSpec& noise,
                                          double p) {
    DependenceProfile prof;
    prof.p = p;
    const double dn = noise.diff_pnorm(p);
    for (const auto& [site, a] : kernel.taps)
        prof.entries.emplace_back(site, DeltaEstimate{std::abs(a) * dn, 0.0, DeltaMethod::Analytic});
    return prof;
}

DependenceProfile profile_monte_carlo(const FieldModel& model, double p, std::size_t replicates,
                                      std::uint64_t seed) {
    DependenceProfile prof;
    prof.p = p;
    const Coord r = model.window_radius();
    const std::size_t d = model.dim();
    LatticePoint i = LatticePoint::zero(d);
    for (std::size_t m = 0; m < d; ++m) i[m] = -r;
    while (true) {
        prof.entries.emplace_back(i, delta_monte_carlo(model, i, p, replicates, seed));
        std::size_t m = 0;
        while (m < d && i[m] == r) i[m++] = -r;
        if (m == d) break;
        ++i[m];
    }
    return prof;
}

DeltaEstimate stability_sum(const FieldModel& model, double p, std::size_t replicates,
                            std::uint64_t seed) {
    if (model.kind() == FieldModel::Kind::Linear)
        return profile_analytic_linear(model.linear_kernel(), model.noise(), p).stability_sum();
    return profile_monte_carlo(model, p, replicates, seed).stability_sum();
}

double orlicz_norm(const std::function<double(std::size_t)>& sampler, const OrliczSpec& spec,
                   std::size_t replicates) {
    if (replicates == 0) throw std::invalid_argument("orlicz_norm: need replicates");
    std::vector<double> z(replicates);
    double zmax = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
        z[r] = std::abs(sampler(r));
        zmax = std::max(zmax, z[r]);
    }
    if (zmax == 0.0) return 0.0;

    auto mean_psi = [&](double c) {
        double s = 0.0;
        for (double v : z) s += spec.psi(v / c);
        return s / static_cast<double>(replicates);
    };

    constexpr double kCap = 1152921504606846976.0;  // 2^60
    double lo, hi;
    if (mean_psi(1.0) > 1.0) {
        lo = 1.0;
        hi = 2.0;
        while (mean_psi(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > kCap)
                throw std::runtime_error("orlicz_norm: no bracket below 2^60");
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while (mean_psi(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1.0 / kCap) return hi;
        }
    }
    while (hi - lo > 1e-6 * hi) {
        double mid = 0.5 * (lo + hi);
        (mean_psi(mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
}

RosenthalTerms volterra_rosenthal_terms(const VolterraKernel& kernel, const LatticePoint& k,
                                        double p) {
    if (p < 2.0) throw std::invalid_argument("volterra_rosenthal_terms: p must be >= 2");
    RosenthalTerms t;
    for (const auto& pr : kernel.pairs) {
        if (pr.s2 == k) {
            t.a_k += pr.a * pr.a;
            t.b_k += std::pow(std::abs(pr.a), p);
        }
        if (pr.s1 == k) {
            t.a_k += pr.a * pr.a;
            t.b_k += std::pow(std::abs(pr.a), p);
        }
    }
    return t;
}

std::vector<std::pair<LatticePoint, double>> product_field_delta_bound(
    const DependenceProfile& profile, const LatticePoint& k, double x0_pnorm) {
    std::set<LatticePoint> sites;
    for (const auto& [site, est] : profile.entries) {
        sites.insert(site);
        sites.insert(site - k);
    }
    std::vector<std::pair<LatticePoint, double>> out;
    for (const auto& i : sites) {
        double b = x0_pnorm * (profile.at(i + k).value + profile.at(i).value);
        out.emplace_back(i, b);
    }
    return out;
}

}  // namespace randfield
