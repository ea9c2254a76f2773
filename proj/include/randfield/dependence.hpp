#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"

namespace randfield {

/// The Young function psi_beta(x) = exp((x+h)^beta) - exp(h^beta) with
/// h = ((1-beta)/beta)^(1/beta) for beta in (0,1), h = 0 otherwise.
struct OrliczSpec {
    double beta = 1.0;

    double shift() const;
    double psi(double x) const;
};

enum class DeltaMethod { Analytic, MonteCarlo };

struct DeltaEstimate {
    double value = 0.0;
    double se = 0.0;
    DeltaMethod method = DeltaMethod::Analytic;
};

/// Linear fields: delta_{i,p} = |a_i| ||eps - eps'||_p, exact.
double delta_analytic_linear(const LinearKernel& kernel, const NoiseSpec& noise,
                             const LatticePoint& i, double p);

/// Empirical p-norm of X_i - X_i* over independent couplings, with a
/// delete-one jackknife standard error. Returns (0, 0) without sampling when
/// the site is outside the evaluation window.
DeltaEstimate delta_monte_carlo(const FieldModel& model, const LatticePoint& i, double p,
                                std::size_t replicates, std::uint64_t seed);

/// Same estimator for the truncation residual (X_i - Xbar_i); exactly zero
/// when m covers the window of a linear or Volterra model.
DeltaEstimate delta_truncated(const FieldModel& model, Coord m, const LatticePoint& i, double p,
                              std::size_t replicates, std::uint64_t seed);

/// The map i -> delta_{i,p} over the window box, plus its sum Delta_p.
struct DependenceProfile {
    double p = 2.0;
    std::vector<std::pair<LatticePoint, DeltaEstimate>> entries;

    /// Delta_p with propagated standard error (entries are independent
    /// estimates, so variances add).
    DeltaEstimate stability_sum() const;
    DeltaEstimate at(const LatticePoint& i) const;
};

DependenceProfile profile_analytic_linear(const LinearKernel& kernel, const NoiseSpec& noise,
                                          double p);
DependenceProfile profile_monte_carlo(const FieldModel& model, double p, std::size_t replicates,
                                      std::uint64_t seed);

/// Delta_p for a model: analytic for linear kernels, Monte Carlo otherwise.
DeltaEstimate stability_sum(const FieldModel& model, double p, std::size_t replicates,
                            std::uint64_t seed);

/// Luxemburg norm ||Z||_psi = inf { c > 0 : E psi(|Z|/c) <= 1 } over a fixed
/// sample of Z, by geometric bracketing plus bisection to relative
/// tolerance 1e-6. The sampler maps a replicate index to a draw of Z.
double orlicz_norm(const std::function<double(std::size_t)>& sampler, const OrliczSpec& spec,
                   std::size_t replicates);

struct RosenthalTerms {
    double a_k = 0.0;  // sum of squared coefficients with index k in either slot
    double b_k = 0.0;  // same with |.|^p
};

RosenthalTerms volterra_rosenthal_terms(const VolterraKernel& kernel, const LatticePoint& k,
                                        double p);

/// Bound on delta_{i,p/2} of the product field Y_i = X_i X_{i+k}:
/// ||X_0||_p (delta_{i+k,p} + delta_{i,p}).
std::vector<std::pair<LatticePoint, double>> product_field_delta_bound(
    const DependenceProfile& profile, const LatticePoint& k, double x0_pnorm);

}  // namespace randfield
