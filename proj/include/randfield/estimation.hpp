#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"

namespace randfield {

struct SumStatistics {
    double value = 0.0;
    std::size_t domain_size = 0;
    std::optional<double> exact_variance;  // filled by with_exact_variance
};

/// S_Gamma = sum_{i in Gamma} X_i; blocked deterministic accumulation.
SumStatistics partial_sum(const FieldModel& model, const NoiseField& noise, const Domain& g);

/// Attaches E S_Gamma^2 to the statistics (closed-form models only).
SumStatistics with_exact_variance(SumStatistics stats, const FieldModel& model, const Domain& g);

/// Serial reference path, bit-identical to partial_sum for any thread count.
double partial_sum_serial(const FieldModel& model, const NoiseField& noise, const Domain& g);

/// E S_Gamma^2 = sum_k |Gamma ∩ (Gamma - k)| gamma_k over the finite lag set.
double variance_exact(const FieldModel& model, const Domain& g);

/// E (sum_i a_i X_i)^2 = sum_{i,j} a_i a_j gamma_{j-i}; weights follow the
/// lexicographic point order of the domain.
double weighted_variance_exact(const FieldModel& model, const Domain& g,
                               std::span<const double> weights);

double sample_mean(const FieldModel& model, const NoiseField& noise, const Domain& g);

/// gammahat_k = (1/|Xi|) sum_{i in Xi} X_i X_{i+k} - muhat^2 with
/// muhat = S_Gamma / |Gamma| over the full domain.
double sample_autocovariance(const FieldModel& model, const NoiseField& noise, const Domain& g,
                             const LatticePoint& k);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double half_width = 0.0;
    double level = 0.0;
    bool degenerate = false;  // sigma^2 = 0
};

/// estimate +/- z_{(1+level)/2} sigma / sqrt(n_effective).
ConfidenceInterval confidence_interval(double estimate, double longrun_variance,
                                       double n_effective, double level);

struct LagEstimate {
    LatticePoint lag;
    std::size_t xi_size = 0;
    double gammahat = 0.0;          // mean over replicates
    double se = 0.0;                // Monte Carlo standard error (0 if one replicate)
    std::optional<double> exact;    // closed-form gamma_k when available
};

struct EstimationReport {
    std::size_t domain_size = 0;
    std::size_t replicates = 0;
    double mean = 0.0;     // muhat (mean over replicates)
    double mean_se = 0.0;
    ConfidenceInterval mean_ci;
    std::vector<LagEstimate> lags;
};

/// Runs `replicates` independent realizations; reports muhat and gammahat_k
/// per requested lag with Monte Carlo standard errors and a CLT confidence
/// interval for the mean.
EstimationReport estimate_report(const FieldModel& model, const Domain& g,
                                 const std::vector<LatticePoint>& lags, double level,
                                 std::size_t replicates, std::uint64_t seed);

}  // namespace randfield
