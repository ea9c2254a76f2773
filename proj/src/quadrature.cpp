#include "randfield/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace randfield {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix of the
// orthonormal recurrence, weights the squared first eigenvector components
// (times the total mass, which is 1 for probability measures).
QuadratureRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag) {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        jacobi(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            jacobi(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
            jacobi(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("quadrature: eigen decomposition failed");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        double v0 = solver.eigenvectors()(0, i);
        rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_hermite(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature: n must be positive");
    std::vector<double> diag(n, 0.0), off(n > 1 ? n - 1 : 0);
    for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
    return golub_welsch(diag, off);
}

QuadratureRule gauss_laguerre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature: n must be positive");
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    for (std::size_t k = 0; k < n; ++k) diag[k] = 2.0 * static_cast<double>(k) + 1.0;
    for (std::size_t k = 1; k < n; ++k) off[k - 1] = static_cast<double>(k);
    return golub_welsch(diag, off);
}

QuadratureRule gauss_legendre_unit(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature: n must be positive");
    std::vector<double> diag(n, 0.0), off(n > 1 ? n - 1 : 0);
    for (std::size_t k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    QuadratureRule rule = golub_welsch(diag, off);
    for (double& x : rule.nodes) x = 0.5 * (x + 1.0);
    return rule;
}

QuadratureRule noise_quadrature(const NoiseSpec& spec, std::size_t n) {
    constexpr double kSqrt3 = 1.7320508075688772935;
    switch (spec.dist) {
        case NoiseDistribution::Normal:
            return gauss_hermite(n);
        case NoiseDistribution::Rademacher:
            return QuadratureRule{{-1.0, 1.0}, {0.5, 0.5}};
        case NoiseDistribution::Uniform: {
            QuadratureRule rule = golub_welsch(std::vector<double>(n, 0.0), [&n] {
                std::vector<double> off(n > 1 ? n - 1 : 0);
                for (std::size_t k = 1; k < n; ++k) {
                    double kk = static_cast<double>(k);
                    off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
                }
                return off;
            }());
            for (double& x : rule.nodes) x *= kSqrt3;
            return rule;
        }
        case NoiseDistribution::Exponential: {
            QuadratureRule rule = gauss_laguerre(n);
            for (double& x : rule.nodes) x -= 1.0;
            return rule;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace randfield
