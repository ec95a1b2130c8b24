#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "expanderlab/geometry.hpp"
#include "expanderlab/tridiagonal.hpp"

namespace expanderlab {

/// DriftOnly reduces the drifted Laplacian Lu = Du + <x, grad u>/2;
/// Stability reduces L = L_drift + |A|^2 - 1/2.
enum class PotentialKind { DriftOnly, Stability };

enum class BoundaryCondition {
  DirichletTruncated,  // u = 0 at both ends of [-R, R] around the base point
  NeumannCap           // zero flux at a rotational pole, u = 0 at s = R
};

const char* to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& name);
const char* to_string(BoundaryCondition bc);

/// Smooth data of a one-dimensional reduction, as functions of the reduced
/// coordinate t (arclength measured from the base point).
struct ReducedFields {
  /// log of the reduced measure density: |x|^2/4 plus log r^{n-1} on
  /// rotational surfaces.
  std::function<double(double)> measure_log;
  /// |x|^2/4.
  std::function<double(double)> weight_log;
  /// q: 0 for the drift operator, |A|^2 - 1/2 for stability.
  std::function<double(double)> potential;
  /// V = W'^2/4 + W''/2 - q with W = measure_log: the potential of the
  /// Schroedinger operator -d^2/dt^2 + V conjugate to -(L + q).
  std::function<double(double)> effective_potential;
};

struct GridOptions {
  std::size_t grid_size = 4001;
  double domain_radius = 12.0;
};

/// Sturm-Liouville reduction of -(L + q) after the ground-state transform
/// psi = exp(W/2) u.
///
/// Unknowns sit at `grid`; measure_log_flux[j] is log rho at the midpoint
/// left of unknown j (j = size() is right of the last one). A NeumannCap
/// pole has measure_log_flux[0] = -inf, i.e. zero flux.
struct WeightedOperator1D {
  std::vector<double> grid;
  double h = 0.0;
  std::vector<double> weight_log;
  std::vector<double> measure_log;
  std::vector<double> measure_log_flux;
  std::vector<double> potential;
  std::vector<double> effective_potential;
  BoundaryCondition bc = BoundaryCondition::DirichletTruncated;
  double domain_radius = 0.0;
  std::size_t grid_size = 0;
  /// Separation constant contributed by flat factors: 1/2 per R direction.
  double flat_shift = 0.0;
  PotentialKind kind = PotentialKind::DriftOnly;
  int n = 1;
  std::shared_ptr<const ReducedFields> fields;

  std::size_t size() const { return grid.size(); }

  /// Symmetric tridiagonal matrix of the conservative discretization
  ///   (H psi)_i = [rho_{i+1/2}(u_i - u_{i+1}) + rho_{i-1/2}(u_i - u_{i-1})] / (h^2 sqrt(rho_i))
  ///               - q_i psi_i,   u = psi / sqrt(rho),
  /// which is second-order consistent with -psi'' + V psi.
  SymmetricTridiagonal matrix() const;

  /// Same reduction on another grid size and the same radius.
  WeightedOperator1D resampled(std::size_t grid_size) const;
};

/// Assembles an operator on `grid_size` nodes over `domain_radius` from
/// reduced fields.
WeightedOperator1D assemble_operator(std::shared_ptr<const ReducedFields> fields, BoundaryCondition bc,
                                     const GridOptions& grid, double flat_shift, PotentialKind kind, int n);

/// Hyperplanes reduce to one coordinate line plus n-1 flat factors;
/// cylinders to the profile plus n-1 flat factors; rotational surfaces to
/// radial functions (the ground state is positive and unique, hence
/// invariant under the symmetry group).
///
/// Throws ReductionUnavailable, UnderResolved (profile shorter than the
/// domain) or OrientationUnset.
WeightedOperator1D ground_state_transform(const ExpanderSurface& surface, PotentialKind kind,
                                          const GridOptions& grid = {});

struct SpectrumResult {
  /// Bottom-first values s with L u + s u = 0 (Rayleigh convention,
  /// nonnegative for the drift operator), flat factors included.
  std::vector<double> eigenvalues;
  /// The same spectrum as eigenvalues of the operator itself (= -eigenvalues).
  std::vector<double> operator_eigenvalues;
  /// Transformed-picture eigenvectors on `grid`, with sum psi^2 h = 1.
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> grid;
  std::size_t m = 0;
  std::size_t grid_size = 0;
  double domain_radius = 0.0;
  BoundaryCondition bc = BoundaryCondition::DirichletTruncated;
  /// |lambda_h - lambda_coarse| / (r^2 - 1) with r the step ratio.
  std::vector<double> richardson;
  std::vector<double> coarse_eigenvalues;
};

struct SpectrumOptions {
  /// Coarse grid for the Richardson estimate: (grid_size + 1) / 2 nodes.
  bool richardson = true;
  /// Throw TruncationDominated when an estimate exceeds this fraction of
  /// the distance to the neighbouring eigenvalue.
  double max_error_to_gap = 0.1;
};

/// Throws NotConverged or TruncationDominated.
SpectrumResult bottom_spectrum(const WeightedOperator1D& op, std::size_t m, const SpectrumOptions& options = {});

/// Rayleigh quotient of a transformed-picture grid function,
/// (psi^T H psi) / (psi^T psi) + flat_shift. Throws ZeroDenominator.
double rayleigh_quotient(const WeightedOperator1D& op, const std::vector<double>& psi);

/// The same quotient in the weighted picture for u = psi exp(-W/2):
///   (sum rho_{j+1/2} (u_{j+1} - u_j)^2 / h^2 - sum q rho u^2) / sum rho u^2.
double weighted_rayleigh_quotient(const WeightedOperator1D& op, const std::vector<double>& u);

/// u = psi exp(-W/2) on the operator grid (scaled so that max|u| = 1).
std::vector<double> untransform(const WeightedOperator1D& op, const std::vector<double>& psi);

}  // namespace expanderlab
