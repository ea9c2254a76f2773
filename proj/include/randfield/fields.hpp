#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randfield/lattice.hpp"
#include "randfield/quadrature.hpp"
#include "randfield/rng.hpp"

namespace randfield {

/// X_k = sum_s a_s eps_{k-s} with finite explicit support.
struct LinearKernel {
    std::size_t dim = 1;
    std::vector<std::pair<LatticePoint, double>> taps;  // sorted by site, unique
    std::optional<double> declared_tail_bound;  // user-supplied sum_{|s|>R} |a_s|

    LinearKernel() = default;
    LinearKernel(std::size_t d, std::vector<std::pair<LatticePoint, double>> entries);

    Coord radius() const;          // max |s|_inf over the support
    double coeff_sum() const;      // sum_s a_s
    double coeff_abs_sum() const;  // sum_s |a_s|
    double coeff_sq_sum() const;   // sum_s a_s^2
    double coeff_at(const LatticePoint& s) const;

    /// Built-ins: "iid" (a_0 = 1) and "2tap" (a_0 = a_{e1} = 1).
    static LinearKernel named(const std::string& name, std::size_t dim);
    /// One tap per line, "s_1,...,s_d : a"; optional "tail=<bound>" line.
    static LinearKernel parse(std::istream& in, std::size_t dim);
    static LinearKernel load(const std::string& path, std::size_t dim);
};

/// Second-order kernel: X_k = sum a_{s1,s2} eps_{k-s1} eps_{k-s2}, zero
/// diagonal enforced at construction.
struct VolterraKernel {
    struct Pair {
        LatticePoint s1, s2;
        double a;
    };
    std::size_t dim = 1;
    std::vector<Pair> pairs;

    VolterraKernel() = default;
    VolterraKernel(std::size_t d, std::vector<Pair> entries);

    Coord radius() const;
    double coeff_at(const LatticePoint& s1, const LatticePoint& s2) const;

    /// Built-in: "lag1" (a_{0,e1} = 1, i.e. X_k = eps_k eps_{k-e1}).
    static VolterraKernel named(const std::string& name, std::size_t dim);
    /// One pair per line, "s1|s2 : a" with comma-separated coordinates.
    static VolterraKernel parse(std::istream& in, std::size_t dim);
    static VolterraKernel load(const std::string& path, std::size_t dim);
};

enum class LipschitzMap { Abs, Tanh };

double lipschitz_apply(LipschitzMap map, double x);

/// A concrete stationary field X_k = g(eps_{k-s}) with a finite evaluation
/// window. All models are centered; linear and Volterra carry closed-form
/// autocovariances.
class FieldModel {
public:
    enum class Kind { Linear, Volterra, Subordinated };

    static FieldModel linear(LinearKernel kernel, NoiseSpec noise);
    static FieldModel volterra(VolterraKernel kernel, NoiseSpec noise);
    static FieldModel subordinated(LinearKernel base, LipschitzMap map, NoiseSpec noise);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    const NoiseSpec& noise() const { return noise_; }
    Coord window_radius() const { return radius_; }
    bool has_closed_forms() const { return kind_ != Kind::Subordinated; }
    const LinearKernel& linear_kernel() const { return linear_; }
    const VolterraKernel& volterra_kernel() const { return volterra_; }
    LipschitzMap lipschitz_map() const { return map_; }
    double centering() const { return centering_; }
    std::string descriptor() const { return descriptor_; }

    template <class Noise>
    double eval(const Noise& field, const LatticePoint& k) const {
        switch (kind_) {
            case Kind::Linear: {
                double s = 0.0;
                for (const auto& [site, a] : linear_.taps) s += a * field.sample(k - site);
                return s;
            }
            case Kind::Volterra: {
                double s = 0.0;
                for (const auto& pr : volterra_.pairs)
                    s += pr.a * field.sample(k - pr.s1) * field.sample(k - pr.s2);
                return s;
            }
            case Kind::Subordinated: {
                double s = 0.0;
                for (const auto& [site, a] : linear_.taps) s += a * field.sample(k - site);
                return lipschitz_apply(map_, s) - centering_;
            }
        }
        return 0.0;
    }

    /// gamma_k = cov(X_0, X_k); closed form for Linear and Volterra only.
    double autocovariance_exact(const LatticePoint& k) const;
    /// Lags k with gamma_k != 0 (superset is fine, exact zeros dropped).
    std::vector<LatticePoint> covariance_support() const;
    /// sigma^2 = sum_k gamma_k over the finite covariance support.
    double longrun_variance_exact() const;

    /// "linear:<spec>", "volterra:<spec>", "subordinated:<spec>:K=abs|tanh";
    /// <spec> is a built-in name or a kernel file path.
    static FieldModel parse(const std::string& descriptor, std::size_t dim, NoiseSpec noise);

private:
    FieldModel() = default;

    Kind kind_ = Kind::Linear;
    std::size_t dim_ = 1;
    NoiseSpec noise_;
    Coord radius_ = 0;
    LinearKernel linear_;      // kernel for Linear, base for Subordinated
    VolterraKernel volterra_;  // kernel for Volterra
    LipschitzMap map_ = LipschitzMap::Abs;
    double centering_ = 0.0;
    std::string descriptor_;
};

struct ValueWithError {
    double value = 0.0;
    double se = 0.0;
};

/// The m-dependent approximation Xbar_j = E(X_j | eps_{j-s}, |s|_inf <= m).
/// Linear/Volterra truncations are exact coefficient zeroings; the
/// subordinated case integrates the out-of-window coordinates with a
/// 32-node tensor rule (<= 2 coordinates) or falls back to Monte Carlo
/// averaging with 10^4 draws and a reported standard error.
class TruncatedField {
public:
    TruncatedField(const FieldModel& base, Coord m);

    Coord m() const { return m_; }
    const FieldModel& base() const { return *base_; }
    bool exact() const { return out_taps_.empty() || base_->kind() != FieldModel::Kind::Subordinated; }

    template <class Noise>
    double eval(const Noise& field, const LatticePoint& k) const {
        return eval_with_error(field, k).value;
    }

    template <class Noise>
    ValueWithError eval_with_error(const Noise& field, const LatticePoint& k) const {
        switch (base_->kind()) {
            case FieldModel::Kind::Linear: {
                double s = 0.0;
                for (const auto& [site, a] : in_taps_) s += a * field.sample(k - site);
                return {s, 0.0};
            }
            case FieldModel::Kind::Volterra: {
                double s = 0.0;
                for (const auto& pr : in_pairs_)
                    s += pr.a * field.sample(k - pr.s1) * field.sample(k - pr.s2);
                return {s, 0.0};
            }
            case FieldModel::Kind::Subordinated: {
                double in_sum = 0.0;
                for (const auto& [site, a] : in_taps_) in_sum += a * field.sample(k - site);
                return subordinated_conditional_mean(in_sum);
            }
        }
        return {0.0, 0.0};
    }

private:
    ValueWithError subordinated_conditional_mean(double in_sum) const;

    const FieldModel* base_;
    Coord m_;
    std::vector<std::pair<LatticePoint, double>> in_taps_;
    std::vector<std::pair<LatticePoint, double>> out_taps_;
    std::vector<VolterraKernel::Pair> in_pairs_;
    QuadratureRule out_rule_;  // per-coordinate rule when <= 2 taps are out
};

}  // namespace randfield
