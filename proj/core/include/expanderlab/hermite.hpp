#pragma once

#include <span>
#include <vector>

namespace expanderlab {

/// n/2 + sum(k)/2: eigenvalue of the drifted Laplacian on R^n for the
/// product eigenfunction with multi-index k. Throws InvalidInput.
double hermite_eigenvalue(int n, std::span<const int> k);

/// Physicists' Hermite polynomial: H0 = 1, H1 = 2t,
/// H_{k+1} = 2t H_k - 2k H_{k-1}.
double hermite_polynomial(int k, double t);

/// Phi(x) = prod H_{k_i}(x_i / 2) exp(-|x|^2/4) at each point (one
/// coordinate vector of length n per point). Throws InvalidInput.
std::vector<double> hermite_eigenfunction(int n, std::span<const int> k,
                                          const std::vector<std::vector<double>>& points);

/// All multi-indices of length n with |k| <= max_order, by total order and
/// then with the first index decreasing.
std::vector<std::vector<int>> multi_indices(int n, int max_order);

}  // namespace expanderlab
