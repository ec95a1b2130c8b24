#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace expanderlab {

/// Real symmetric tridiagonal matrix: diagonal a[0..n), off-diagonal b[0..n-1)
/// with b[i] coupling rows i and i+1.
struct SymmetricTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const { return diagonal.size(); }
  std::vector<double> apply(const std::vector<double>& x) const;
};

/// Number of eigenvalues strictly below x (Sturm sequence via the LDL^T
/// pivots of T - xI).
std::size_t sturm_count(const SymmetricTridiagonal& t, double x);

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const SymmetricTridiagonal& t);

/// The m smallest eigenvalues in ascending order, by bisection on the Sturm
/// count. Throws NotConverged if an eigenvalue is not isolated to full
/// precision within 200 halvings.
std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t m);

/// Eigenvector for a computed eigenvalue by inverse iteration with a
/// partially pivoted tridiagonal factorization. Unit Euclidean norm; the
/// sign is fixed so that the largest-magnitude component is positive.
std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double eigenvalue);

}  // namespace expanderlab
