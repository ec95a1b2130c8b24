#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "expanderlab/geometry.hpp"

namespace expanderlab {

struct ShootingConfig {
  /// Distance of the start point from the origin. For a rotational cap
  /// start this is the height of the pole on the axis.
  double d0 = 1.0;
  /// Curves: tangent angle measured from the position direction.
  /// Rotational: tangent angle measured from the rotation axis.
  double theta0 = std::numbers::pi / 2;
  double s_max = 20.0;
  double ds = 1e-3;
  double tol_residual = 1e-6;
  int integrator_order = 4;

  /// Throws InvalidInput.
  void validate() const;
};

ExpanderSurface make_hyperplane(int n);

/// Integrates gamma' = T, T' = k N with the curvature carried as a state
/// variable, k' = -k <gamma, T> / 2, from gamma(0) = (d0, 0) in both
/// directions. The expander relation k = <gamma, N>/2 is imposed only at
/// s = 0; it is a first integral of the system, so its drift is the
/// residual that acceptance measures.
///
/// Throws ResidualExceeded or BlowUp.
ProfileCurve shoot_expander_curve(const ShootingConfig& config);

/// gamma x R^{n-1}, oriented so that H >= 0.
ExpanderSurface make_curve_cylinder(ProfileCurve curve, int n);

enum class RotationalStart {
  Cap,     // pole (0, d0) on the axis, profile perpendicular to it
  OffAxis  // (r, z) = (d0, 0), integrated in both directions
};

/// Profile ODE of an O(n)-invariant expander in (r, z):
///   alpha' = k,
///   k = <x, N>/2 - (n-1) sin(alpha)/r,
/// with k again carried as a state variable. The cap start replaces the
/// first step by the series solution at the pole, where
/// k(0) = d0 / (2n).
///
/// Throws AxisSingularity, ResidualExceeded or BlowUp.
ExpanderSurface shoot_rotational_expander(const ShootingConfig& config, int n,
                                          RotationalStart start = RotationalStart::Cap);

/// Counterclockwise unit circle around the origin, as a cylinder profile.
ExpanderSurface make_circle_control(double ds = 1e-3);

/// Homothetic copy of a surface; not an expander for c != 1.
ExpanderSurface make_rescaled_control(const ExpanderSurface& surface, double c);

/// Curves: opening angle between the two asymptotic rays.
/// Rotational: half-opening angle of the asymptotic cone from the axis.
/// Hyperplanes: pi.
double asymptotic_cone_angle(const ExpanderSurface& surface);

enum class MemberRole { Member, NegativeControl };

struct SweepMember {
  std::string id;
  std::string kind;  // "hyperplane", "curve", "rotational", "circle", "rescaled"
  int n = 1;
  ShootingConfig config;
  MemberRole role = MemberRole::Member;
  ExpanderSurface surface;
  double residual_max = 0.0;
  MeanConvexity convexity = MeanConvexity::Flat;
  double cone_angle = 0.0;
};

SweepMember describe_member(std::string id, std::string kind, int n, const ShootingConfig& config,
                            MemberRole role, ExpanderSurface surface);

/// File-safe member id: hyperplane_<n>, curve_d0_<d0>[_theta<theta0>],
/// rotational_n<n>_h<height> or rotational_n<n>_r<d0>_theta<theta0>.
std::string member_id(const std::string& kind, int n, const ShootingConfig& config);

struct SweepSpec {
  std::vector<double> curve_d0 = {0.25, 0.5, 1.0, 2.0};
  double curve_theta0 = std::numbers::pi / 2;
  int curve_n = 2;
  std::vector<double> rotational_cap_heights = {0.5, 1.0};
  int rotational_n = 2;
  std::vector<int> hyperplane_dims = {1, 2, 3};
  double ds = 1e-3;
  double s_max = 20.0;
  bool include_negative_controls = false;
};

/// Generates the sweep members in a fixed order (curves, rotational,
/// hyperplanes, then controls). Members are independent; threads > 1
/// generates them concurrently.
std::vector<SweepMember> generate_sweep(const SweepSpec& spec, int threads = 1);

std::vector<SweepMember> negative_controls(double ds);

}  // namespace expanderlab
