#pragma once

#include <cstddef>
#include <vector>

#include "randfield/rng.hpp"

namespace randfield {

/// Nodes and weights of an expectation rule: E f(X) ~ sum_i w_i f(x_i),
/// with weights summing to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss rule for the standard normal measure (probabilists' Hermite).
QuadratureRule gauss_hermite(std::size_t n);

/// Gauss rule for the Exp(1) measure on [0, inf) (Laguerre).
QuadratureRule gauss_laguerre(std::size_t n);

/// Gauss-Legendre rule for integral_0^1 f(x) dx.
QuadratureRule gauss_legendre_unit(std::size_t n);

/// Expectation rule matched to a noise law; Rademacher is the exact
/// two-point rule, the others are n-node Gauss rules.
QuadratureRule noise_quadrature(const NoiseSpec& spec, std::size_t n);

}  // namespace randfield
