#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randfield/estimation.hpp"
#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"

namespace randfield {

/// Sorted replicate values of a statistic.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t count() const { return values_.size(); }
    double cdf(double x) const;       // right-continuous step function
    double cdf_left(double x) const;  // P(Z < x)
    double mean() const;
    double variance() const;  // n-1 normalization

private:
    std::vector<double> values_;
};

/// Comparison law N(mean, var); var = 0 is the point mass at mean.
struct NormalComparison {
    double mean = 0.0;
    double var = 1.0;
};

/// sup_x |F_emp(x) - Phi(x)|, exact for the step function (both one-sided
/// gaps evaluated at every jump). Requires var > 0.
double kolmogorov_distance(const EmpiricalDistribution& emp, NormalComparison cmp);

/// Levy distance inf{ eps : G(x-eps)-eps <= F(x) <= G(x+eps)+eps for all x },
/// by bisection to 1e-4 with the sup checked at the empirical jump points and
/// a 4096-point normal quantile grid. var = 0 (point-mass comparison) is
/// allowed.
double levy_distance(const EmpiricalDistribution& emp, NormalComparison cmp);

enum class StandardizationMode { ExactSigma, Longrun, Empirical };

std::string to_string(StandardizationMode mode);
StandardizationMode parse_mode(const std::string& name);

struct CLTReport {
    std::string domain_descriptor;
    std::size_t domain_size = 0;
    std::size_t replicates = 0;
    StandardizationMode mode = StandardizationMode::ExactSigma;
    double comparison_variance = 0.0;
    double kolmogorov = 0.0;
    double levy = 0.0;
    double tolerance = 0.0;
    bool degenerate = false;
    bool pass = false;
    std::vector<double> statistics;  // sorted replicate values
};

/// N replicates of S_Gamma / sqrt(|Gamma|) against N(0, v) where v is the
/// exact variance ratio, the long-run variance, or the empirical variance,
/// per mode.
CLTReport clt_experiment(const FieldModel& model, const Domain& g, std::size_t replicates,
                         std::uint64_t seed, StandardizationMode mode, double tolerance);

struct MomentCase {
    std::size_t index = 0;
    double weight_sq_sum = 0.0;
    double bound = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    std::optional<double> exact;  // closed-form LHS when p = 2
    bool violation = false;       // estimate - 3 se > bound
    bool exact_violation = false;
};

struct MomentReport {
    double p = 2.0;
    double delta_p = 0.0;
    std::size_t replicates = 0;
    std::vector<MomentCase> cases;
    std::size_t violations = 0;
    std::size_t exact_violations = 0;
    bool pass = false;
};

/// || sum_i a_i X_i ||_p against (2p sum a_i^2)^(1/2) Delta_p for one weight
/// vector.
MomentReport moment_inequality_check(const FieldModel& model, const Domain& g,
                                     const std::vector<double>& weights, double p,
                                     std::size_t replicates, std::uint64_t seed);

/// Seeded battery of random weight vectors (uniform in [-1,1] per site).
MomentReport moment_inequality_battery(const FieldModel& model, const Domain& g, double p,
                                       std::size_t cases, std::size_t replicates,
                                       std::uint64_t seed);

struct VarianceLimitRow {
    long long n = 0;
    double ratio = 0.0;      // variance_exact(box n) / n^d
    double rel_error = 0.0;  // |ratio / limit - 1|
};

struct VarianceLimitReport {
    double limit = 0.0;  // sigma^2
    std::vector<VarianceLimitRow> rows;
    bool decreasing = false;
    bool degenerate = false;
    bool pass = false;
};

VarianceLimitReport variance_limit_check(const FieldModel& model,
                                         const std::vector<long long>& box_sizes);

struct TruncationRow {
    Coord m = 0;
    double gap = 0.0;  // ||S - Sbar||_2 / sigma_Gamma, Monte Carlo
    double se = 0.0;
};

struct TruncationReport {
    double sigma = 0.0;  // sqrt(E S^2)
    std::vector<TruncationRow> rows;
    bool zero_at_full_window = true;
    bool nonincreasing = true;
    bool pass = false;
};

/// Shared-seed Monte Carlo of the truncation gap per m.
TruncationReport truncation_gap_check(const FieldModel& model, const Domain& g,
                                      const std::vector<Coord>& m_values, std::size_t replicates,
                                      std::uint64_t seed);

struct AutocovCLTReport {
    LatticePoint lag;
    std::size_t xi_size = 0;
    std::size_t replicates = 0;
    double gamma_exact = 0.0;
    double gamma_mean = 0.0;
    double gamma_se = 0.0;
    double comparison_variance = 0.0;
    double kolmogorov = 0.0;
    double levy = 0.0;
    double tolerance = 0.0;
    bool degenerate = false;
    bool pass = false;
    std::vector<double> statistics;  // sorted sqrt(|Xi|)(gammahat - gamma)
};

/// Replicates of sqrt(|Xi|)(gammahat_k - gamma_k) against a normal with the
/// empirically standardized variance.
AutocovCLTReport autocov_clt_experiment(const FieldModel& model, const Domain& g,
                                        const LatticePoint& k, std::size_t replicates,
                                        std::uint64_t seed, double tolerance);

}  // namespace randfield
