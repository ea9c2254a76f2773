#include "randfield/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "randfield/normal.hpp"
#include "randfield/quadrature.hpp"

namespace randfield {

namespace detail {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                        std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t site_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate,
                        const LatticePoint& j) {
    std::array<std::uint64_t, 4> ctr{0, 0, 0, replicate};
    if (j.dim() > 0) ctr[0] = static_cast<std::uint64_t>(j[0]);
    if (j.dim() > 1) ctr[1] = static_cast<std::uint64_t>(j[1]);
    if (j.dim() > 2) ctr[2] = static_cast<std::uint64_t>(j[2]);
    for (std::size_t m = 3; m < j.dim(); ++m)
        ctr[2] = mix64(ctr[2] ^ (static_cast<std::uint64_t>(j[m]) + kPhiloxW0 * m));
    return philox4x64(ctr, {seed, stream})[0];
}

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return philox4x64({counter, 0, 0, 0x636f756eull}, {seed, stream})[0];
}

}  // namespace detail

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

// E|Z|^p for Z standard normal: 2^(p/2) Gamma((p+1)/2) / sqrt(pi).
double normal_abs_moment(double p) {
    return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0))) /
           std::sqrt(M_PI);
}

// E|eps|^p for eps = E - 1, E ~ Exp(1):
//   integral_0^1 (1-x)^p e^-x dx + integral_1^inf (x-1)^p e^-x dx
// The second term is Gamma(p+1)/e; the first is evaluated by quadrature.
double exponential_abs_moment(double p) {
    const auto rule = gauss_legendre_unit(64);
    double head = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = rule.nodes[i];
        head += rule.weights[i] * std::pow(1.0 - x, p) * std::exp(-x);
    }
    return head + std::exp(std::lgamma(p + 1.0) - 1.0);
}

}  // namespace

double NoiseSpec::abs_moment(double p) const {
    if (p < 1.0) throw std::invalid_argument("abs_moment: p must be >= 1");
    switch (dist) {
        case NoiseDistribution::Normal:
            return normal_abs_moment(p);
        case NoiseDistribution::Rademacher:
            return 1.0;
        case NoiseDistribution::Uniform:
            // density 1/(2a) on (-a, a), a = sqrt3: E|x|^p = a^p/(p+1)
            return std::pow(kSqrt3, p) / (p + 1.0);
        case NoiseDistribution::Exponential:
            return exponential_abs_moment(p);
    }
    throw std::logic_error("unreachable");
}

double NoiseSpec::pnorm(double p) const {
    if (std::isinf(p)) {
        switch (dist) {
            case NoiseDistribution::Rademacher:
                return 1.0;
            case NoiseDistribution::Uniform:
                return kSqrt3;
            default:
                throw std::invalid_argument("pnorm: ||eps||_inf is infinite for " + name());
        }
    }
    return std::pow(abs_moment(p), 1.0 / p);
}

double NoiseSpec::diff_pnorm(double p) const {
    if (std::isinf(p)) {
        switch (dist) {
            case NoiseDistribution::Rademacher:
                return 2.0;
            case NoiseDistribution::Uniform:
                return 2.0 * kSqrt3;
            default:
                throw std::invalid_argument("diff_pnorm: p = inf needs a bounded law");
        }
    }
    if (p < 1.0) throw std::invalid_argument("diff_pnorm: p must be >= 1");
    switch (dist) {
        case NoiseDistribution::Normal:
            // eps - eps' ~ N(0, 2)
            return std::sqrt(2.0) * std::pow(normal_abs_moment(p), 1.0 / p);
        case NoiseDistribution::Rademacher:
            // |eps - eps'| is 2 with probability 1/2, else 0
            return 2.0 * std::pow(0.5, 1.0 / p);
        case NoiseDistribution::Uniform: {
            // triangular on (-2a, 2a): E|D|^p = (2a)^p * 2/((p+1)(p+2))
            double m = std::pow(2.0 * kSqrt3, p) * 2.0 / ((p + 1.0) * (p + 2.0));
            return std::pow(m, 1.0 / p);
        }
        case NoiseDistribution::Exponential:
            // E - E' ~ Laplace(1): E|D|^p = Gamma(p+1)
            return std::exp(std::lgamma(p + 1.0) / p);
    }
    throw std::logic_error("unreachable");
}

double NoiseSpec::transform(double u) const {
    switch (dist) {
        case NoiseDistribution::Normal:
            return normal_quantile(u);
        case NoiseDistribution::Rademacher:
            return u < 0.5 ? -1.0 : 1.0;
        case NoiseDistribution::Uniform:
            return kSqrt3 * (2.0 * u - 1.0);
        case NoiseDistribution::Exponential:
            return -std::log1p(-u) - 1.0;
    }
    throw std::logic_error("unreachable");
}

std::string NoiseSpec::name() const {
    switch (dist) {
        case NoiseDistribution::Normal:
            return "normal";
        case NoiseDistribution::Rademacher:
            return "rademacher";
        case NoiseDistribution::Uniform:
            return "uniform";
        case NoiseDistribution::Exponential:
            return "exponential";
    }
    throw std::logic_error("unreachable");
}

NoiseSpec NoiseSpec::parse(const std::string& name) {
    if (name == "normal") return {NoiseDistribution::Normal};
    if (name == "rademacher") return {NoiseDistribution::Rademacher};
    if (name == "uniform") return {NoiseDistribution::Uniform};
    if (name == "exponential") return {NoiseDistribution::Exponential};
    throw std::invalid_argument("unknown noise distribution: " + name);
}

CoupledNoise couple(const NoiseField& field, std::uint64_t fresh_seed) {
    double u = detail::to_unit(
        detail::counter_bits(fresh_seed, detail::kStreamFresh, field.replicate));
    return CoupledNoise{field, field.spec.transform(u)};
}

}  // namespace randfield
