#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace expanderlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Rotation by +90 degrees.
inline Vec2 rotate_quarter(Vec2 a) { return {-a.y, a.x}; }

inline constexpr std::size_t kMinProfileSamples = 16;

/// Arclength-sampled planar curve. For rotational surfaces the plane
/// coordinates are (r, z) with z the rotation axis.
///
/// Samples are uniform in arclength; the normal is always the tangent
/// rotated by +90 degrees and the curvature is signed against it
/// (T' = k N).
class ProfileCurve {
 public:
  ProfileCurve(double s0, double ds, std::vector<Vec2> positions,
               std::vector<Vec2> tangents, std::vector<double> curvature);

  std::size_t size() const { return positions_.size(); }
  double ds() const { return ds_; }
  double s0() const { return s0_; }
  double s(std::size_t i) const { return s0_ + static_cast<double>(i) * ds_; }
  double s_end() const { return s(size() - 1); }

  std::span<const Vec2> positions() const { return positions_; }
  std::span<const Vec2> tangents() const { return tangents_; }
  std::span<const double> curvature() const { return curvature_; }
  Vec2 position(std::size_t i) const { return positions_[i]; }
  Vec2 tangent(std::size_t i) const { return tangents_[i]; }
  Vec2 normal(std::size_t i) const { return rotate_quarter(tangents_[i]); }
  double curvature(std::size_t i) const { return curvature_[i]; }

  /// Homothety x -> c x. Arclength scales by c and curvature by 1/c.
  ProfileCurve scaled(double c) const;

  /// Every other sample, doubling ds.
  ProfileCurve coarsened() const;

  /// Index of the sample closest to the origin.
  std::size_t nearest_to_origin() const;

 private:
  double s0_;
  double ds_;
  std::vector<Vec2> positions_;
  std::vector<Vec2> tangents_;
  std::vector<double> curvature_;
};

/// Rebuilds a curve from its curvature samples by integrating the Frenet
/// equations with the trapezoidal rule (tangent angle, then position).
ProfileCurve integrate_frenet(double s0, double ds, Vec2 start, double start_angle,
                              std::span<const double> curvature);

/// Central-difference curvature <T', N> (one-sided second-order stencils at
/// the endpoints).
std::vector<double> finite_difference_curvature(const ProfileCurve& curve);

/// Second-order first and second derivatives of uniformly sampled data.
std::vector<double> derivative(std::span<const double> f, double h);
std::vector<double> second_derivative(std::span<const double> f, double h);

enum class SurfaceKind { Hyperplane, CurveCylinder, Rotational };

/// Unit normal of the hypersurface relative to the profile normal N:
/// NegativeN means n = -N, PositiveN means n = +N. With NegativeN a curve
/// has H = k (the outward normal of a counterclockwise circle).
enum class Orientation { NegativeN, PositiveN };

inline double orientation_sign(Orientation o) {
  return o == Orientation::NegativeN ? -1.0 : 1.0;
}
inline Orientation flipped(Orientation o) {
  return o == Orientation::NegativeN ? Orientation::PositiveN : Orientation::NegativeN;
}

const char* to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);
const char* to_string(Orientation o);
Orientation orientation_from_string(const std::string& name);

/// A candidate self-expander with a symmetry reduction:
///   Hyperplane(n)           - R^n x {0} in R^{n+1}
///   CurveCylinder(gamma, n) - gamma x R^{n-1}
///   Rotational(gamma, n)    - {(r w, z) : (r, z) in gamma, w in S^{n-1}}
struct ExpanderSurface {
  SurfaceKind kind = SurfaceKind::Hyperplane;
  int n = 1;
  std::optional<ProfileCurve> profile;
  std::optional<Orientation> orientation = Orientation::NegativeN;

  int ambient_dim() const { return n + 1; }
};

/// Throws InvalidInput when the kind/dimension/profile combination is
/// inconsistent.
void validate(const ExpanderSurface& surface);

/// Profile used to sample a surface. Hyperplanes get a straight line
/// through the origin with a dyadic step so that linear data is exact.
ProfileCurve sampling_profile(const ExpanderSurface& surface);

/// Arclength of the base point used for geodesic balls: the profile point
/// nearest the origin.
double base_arclength(const ExpanderSurface& surface);

struct CurvatureData {
  std::vector<double> s;
  std::vector<double> kappa_profile;   // principal curvature along the profile
  std::vector<double> kappa_parallel;  // repeated n-1 times (0 for cylinders)
  std::vector<double> H;
  std::vector<double> A_norm2;
  std::vector<double> A_grad_norm2;
  std::vector<double> position_normal;  // <x, n>
};

CurvatureData curvature_of_profile(const ProfileCurve& curve, SurfaceKind kind, int n,
                                   Orientation orientation = Orientation::NegativeN);

CurvatureData curvature_of(const ExpanderSurface& surface);

/// r = H + <x, n>/2 per sample.
std::vector<double> expander_residual(const ExpanderSurface& surface);

double max_abs(std::span<const double> values);

inline constexpr double kHyperplaneResidualTol = 1e-8;
inline constexpr double kShotResidualTol = 1e-6;

double default_residual_tolerance(SurfaceKind kind);

bool accepted_as_expander(const ExpanderSurface& surface);
bool accepted_as_expander(const ExpanderSurface& surface, double tol);

enum class MeanConvexity { Flat, MeanConvex, NotMeanConvex };
const char* to_string(MeanConvexity m);

/// Flat if max|H| <= flat_tol, MeanConvex if H keeps one sign on every
/// sample (either orientation), NotMeanConvex otherwise.
MeanConvexity classify_mean_convexity(const ExpanderSurface& surface, double flat_tol = 1e-8);

/// Chooses the orientation with sum(H) >= 0.
ExpanderSurface with_normalized_orientation(ExpanderSurface surface);

/// I(R) = integral over the geodesic ball B_R of |A|^2 exp(|x|^2/4).
///
/// The ball is centred at the profile point nearest the origin. For
/// cylinders the distance is sqrt(ds^2 + |y|^2) with y in the flat factor,
/// and the flat integral of exp(|y|^2/4) over a ball of R^{n-1} is done by
/// a cumulative radial quadrature. For rotational surfaces the ball is the
/// arclength band |s - s_base| <= R (the polar cap when the profile starts
/// on the axis).
double weighted_A2_integral(const ExpanderSurface& surface, double R);

}  // namespace expanderlab
