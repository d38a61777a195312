#pragma once

#include <vector>

namespace kf {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// Nodes and weights of the n-point rule, computed by Newton iteration on
/// P_n and cached per order. Exact for polynomials of degree <= 2n - 1.
const GaussLegendre& gauss_legendre(int n);

}  // namespace kf
