#pragma once

#include <cstddef>
#include <vector>

namespace systolic::quadrature {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
/// Exact for polynomials of degree <= 2n - 1.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

/// The same rule mapped affinely onto [a, b].
GaussLegendre gauss_legendre(std::size_t n, double a, double b);

/// Sum with pairwise (tree) reduction; order-deterministic and with
/// O(log n) error growth.
double pairwise_sum(const double* values, std::size_t n);

inline double pairwise_sum(const std::vector<double>& values)
{
    return pairwise_sum(values.data(), values.size());
}

} // namespace systolic::quadrature
