#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "randfield/lattice.hpp"

namespace randfield {

namespace detail {

/// murmur3 64-bit finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
}

/// Philox 4x64-10 counter-based block cipher (Salmon et al., 2011).
/// Stateless: each (counter, key) pair maps to four independent 64-bit words,
/// so any lattice site can be sampled in any order from any thread.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                        std::array<std::uint64_t, 2> key);

// Stream tags keep independent uses of the same seed on disjoint key spaces.
inline constexpr std::uint64_t kStreamNoise = (0x9d1cull << 32) | 0x01;
inline constexpr std::uint64_t kStreamFresh = (0x9d1cull << 32) | 0x02;
inline constexpr std::uint64_t kStreamSubset = (0x9d1cull << 32) | 0x03;
inline constexpr std::uint64_t kStreamCentering = (0x9d1cull << 32) | 0x04;
inline constexpr std::uint64_t kStreamTruncation = (0x9d1cull << 32) | 0x05;
inline constexpr std::uint64_t kStreamWeights = (0x9d1cull << 32) | 0x06;

/// One 64-bit word for lattice site j of replicate `replicate` under
/// (seed, stream). Coordinates 0..1 fill counter words directly; higher
/// coordinates are folded into the third word.
std::uint64_t site_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate,
                        const LatticePoint& j);

/// The open-interval uniform (0,1) carried by 53 of the 64 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

inline double site_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate,
                           const LatticePoint& j) {
    return to_unit(site_bits(seed, stream, replicate, j));
}

/// Scalar counter variant for non-site draws (replicate fan-out etc).
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace detail

enum class NoiseDistribution { Normal, Rademacher, Uniform, Exponential };

/// The innovation law. Every supported parameterization is centered with unit
/// variance: N(0,1), +/-1 with equal probability, uniform(-sqrt3, sqrt3), and
/// Exp(1) - 1.
struct NoiseSpec {
    NoiseDistribution dist = NoiseDistribution::Normal;

    double variance() const { return 1.0; }
    double mean() const { return 0.0; }

    /// E|eps|^p for real p >= 1 (closed form; Exponential uses quadrature for
    /// the incomplete-gamma piece).
    double abs_moment(double p) const;
    /// ||eps||_p = (E|eps|^p)^(1/p); p may be infinity for bounded laws.
    double pnorm(double p) const;
    /// ||eps - eps'||_p for an independent copy eps'; p may be infinity for
    /// bounded laws.
    double diff_pnorm(double p) const;
    double fourth_moment() const { return abs_moment(4.0); }

    /// Maps one uniform(0,1) draw to the law (inverse CDF or exact transform).
    double transform(double u) const;

    std::string name() const;
    static NoiseSpec parse(const std::string& name);
};

/// Lazy realization of the iid field (eps_j): a pure function of
/// (seed, replicate, j). No state, no stored arrays; any number of threads
/// may sample any sites concurrently.
struct NoiseField {
    NoiseSpec spec;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    double sample(const LatticePoint& j) const {
        return spec.transform(detail::site_uniform(seed, detail::kStreamNoise, replicate, j));
    }
};

/// eps* agrees with the base field everywhere except the origin, where an
/// independent fresh draw is substituted (bit-level equality off the origin).
struct CoupledNoise {
    NoiseField base;
    double fresh_at_origin = 0.0;

    double sample(const LatticePoint& j) const {
        if (j.norm_inf() == 0) return fresh_at_origin;
        return base.sample(j);
    }
};

/// The fresh origin draw comes from its own stream keyed by fresh_seed and
/// the base replicate, so couplings across replicates stay independent.
CoupledNoise couple(const NoiseField& field, std::uint64_t fresh_seed);

}  // namespace randfield
