#include "expanderlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expanderlab/error.hpp"

namespace expanderlab {

namespace {

constexpr double kUnitTolerance = 1e-10;
// Radius below which a rotational profile sample counts as lying on the axis.
constexpr double kAxisRadius = 1e-9;
// |T_z| allowed on the axis (the profile must cross it perpendicularly).
constexpr double kCapSlope = 1e-6;
// exp(x) overflows a double just above 709.78.
constexpr double kMaxExponent = 700.0;

double unit_sphere_area(int dim) {
  // |S^dim| = 2 pi^{(dim+1)/2} / Gamma((dim+1)/2)
  const double a = 0.5 * (dim + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

double checked_exp(double exponent) {
  if (!(exponent <= kMaxExponent)) {
    throw Error(ErrorCode::Overflow,
                "weight exp(" + std::to_string(exponent) + ") exceeds the floating range; reduce R");
  }
  return std::exp(exponent);
}

/// Cumulative table of F(a) = |S^{m-1}| int_0^a rho^{m-1} exp(rho^2/4) drho.
class FlatBallIntegral {
 public:
  FlatBallIntegral(int m, double a_max) : m_(m), a_max_(a_max) {
    constexpr int kPanels = 20000;
    h_ = a_max / kPanels;
    table_.assign(kPanels + 1, 0.0);
    const double area = unit_sphere_area(m - 1);
    auto f = [&](double rho) { return area * std::pow(rho, m - 1) * checked_exp(0.25 * rho * rho); };
    double prev = f(0.0);
    for (int i = 1; i <= kPanels; ++i) {
      const double cur = f(i * h_);
      table_[i] = table_[i - 1] + 0.5 * h_ * (prev + cur);
      prev = cur;
    }
  }

  double operator()(double a) const {
    if (a <= 0.0) return 0.0;
    const double t = std::min(a, a_max_) / h_;
    const auto i = std::min(static_cast<std::size_t>(t), table_.size() - 2);
    const double w = t - static_cast<double>(i);
    return (1.0 - w) * table_[i] + w * table_[i + 1];
  }

 private:
  int m_;
  double a_max_;
  double h_ = 0.0;
  std::vector<double> table_;
};

bool starts_on_axis(const ProfileCurve& p) { return std::abs(p.position(0).x) <= kAxisRadius; }

}  // namespace

ProfileCurve::ProfileCurve(double s0, double ds, std::vector<Vec2> positions,
                           std::vector<Vec2> tangents, std::vector<double> curvature)
    : s0_(s0),
      ds_(ds),
      positions_(std::move(positions)),
      tangents_(std::move(tangents)),
      curvature_(std::move(curvature)) {
  if (!(ds_ > 0.0) || !std::isfinite(ds_)) throw Error(ErrorCode::InvalidInput, "ds must be positive");
  if (positions_.size() != tangents_.size() || positions_.size() != curvature_.size()) {
    throw Error(ErrorCode::InvalidInput, "profile sample arrays differ in length");
  }
  if (positions_.size() < 2) throw Error(ErrorCode::InvalidInput, "profile needs at least two samples");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Vec2 x = positions_[i];
    const Vec2 t = tangents_[i];
    if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(curvature_[i])) {
      throw Error(ErrorCode::InvalidInput, "non-finite profile sample");
    }
    if (std::abs(norm(t) - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::InvalidInput, "tangent is not a unit vector at sample " + std::to_string(i));
    }
  }
}

ProfileCurve ProfileCurve::scaled(double c) const {
  std::vector<Vec2> x(positions_.size());
  std::vector<double> k(curvature_.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = c * positions_[i];
    k[i] = curvature_[i] / c;
  }
  return ProfileCurve(c * s0_, c * ds_, std::move(x), tangents_, std::move(k));
}

ProfileCurve ProfileCurve::coarsened() const {
  std::vector<Vec2> x, t;
  std::vector<double> k;
  for (std::size_t i = 0; i < size(); i += 2) {
    x.push_back(positions_[i]);
    t.push_back(tangents_[i]);
    k.push_back(curvature_[i]);
  }
  return ProfileCurve(s0_, 2.0 * ds_, std::move(x), std::move(t), std::move(k));
}

std::size_t ProfileCurve::nearest_to_origin() const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = dot(positions_[i], positions_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ProfileCurve integrate_frenet(double s0, double ds, Vec2 start, double start_angle,
                              std::span<const double> curvature) {
  const std::size_t n = curvature.size();
  std::vector<Vec2> x(n), t(n);
  std::vector<double> k(curvature.begin(), curvature.end());
  double angle = start_angle;
  x[0] = start;
  t[0] = {std::cos(angle), std::sin(angle)};
  for (std::size_t i = 1; i < n; ++i) {
    angle += 0.5 * ds * (curvature[i - 1] + curvature[i]);
    t[i] = {std::cos(angle), std::sin(angle)};
    x[i] = x[i - 1] + (0.5 * ds) * (t[i - 1] + t[i]);
  }
  return ProfileCurve(s0, ds, std::move(x), std::move(t), std::move(k));
}

std::vector<double> derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> second_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 4) return d;
  const double h2 = h * h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return d;
}

std::vector<double> finite_difference_curvature(const ProfileCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> tx(n), ty(n);
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = curve.tangent(i).x;
    ty[i] = curve.tangent(i).y;
  }
  const auto dtx = derivative(tx, curve.ds());
  const auto dty = derivative(ty, curve.ds());
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = dot({dtx[i], dty[i]}, curve.normal(i));
  return k;
}

const char* to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Hyperplane: return "hyperplane";
    case SurfaceKind::CurveCylinder: return "curve_cylinder";
    case SurfaceKind::Rotational: return "rotational";
  }
  return "unknown";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "hyperplane") return SurfaceKind::Hyperplane;
  if (name == "curve_cylinder" || name == "curve") return SurfaceKind::CurveCylinder;
  if (name == "rotational") return SurfaceKind::Rotational;
  throw Error(ErrorCode::InvalidInput, "unknown surface kind '" + name + "'");
}

const char* to_string(Orientation o) { return o == Orientation::NegativeN ? "-N" : "+N"; }

Orientation orientation_from_string(const std::string& name) {
  if (name == "-N") return Orientation::NegativeN;
  if (name == "+N") return Orientation::PositiveN;
  throw Error(ErrorCode::InvalidInput, "unknown orientation '" + name + "'");
}

const char* to_string(MeanConvexity m) {
  switch (m) {
    case MeanConvexity::Flat: return "flat";
    case MeanConvexity::MeanConvex: return "mean_convex";
    case MeanConvexity::NotMeanConvex: return "not_mean_convex";
  }
  return "unknown";
}

void validate(const ExpanderSurface& surface) {
  if (surface.n < 1) throw Error(ErrorCode::InvalidInput, "dimension n must be >= 1");
  switch (surface.kind) {
    case SurfaceKind::Hyperplane:
      break;
    case SurfaceKind::CurveCylinder:
      if (surface.n < 2) throw Error(ErrorCode::InvalidInput, "curve cylinder needs n >= 2");
      if (!surface.profile) throw Error(ErrorCode::InvalidInput, "curve cylinder without profile");
      break;
    case SurfaceKind::Rotational:
      if (surface.n < 2) throw Error(ErrorCode::InvalidInput, "rotational surface needs n >= 2");
      if (!surface.profile) throw Error(ErrorCode::InvalidInput, "rotational surface without profile");
      break;
  }
}

ProfileCurve sampling_profile(const ExpanderSurface& surface) {
  validate(surface);
  if (surface.kind != SurfaceKind::Hyperplane) return *surface.profile;
  constexpr double kStep = 1.0 / 1024.0;
  constexpr int kHalf = 16 * 1024;
  std::vector<Vec2> x, t;
  std::vector<double> k;
  for (int i = -kHalf; i <= kHalf; ++i) {
    x.push_back({i * kStep, 0.0});
    t.push_back({1.0, 0.0});
    k.push_back(0.0);
  }
  return ProfileCurve(-kHalf * kStep, kStep, std::move(x), std::move(t), std::move(k));
}

double base_arclength(const ExpanderSurface& surface) {
  if (surface.kind == SurfaceKind::Hyperplane) return 0.0;
  validate(surface);
  const auto& p = *surface.profile;
  return p.s(p.nearest_to_origin());
}

CurvatureData curvature_of_profile(const ProfileCurve& curve, SurfaceKind kind, int n,
                                   Orientation orientation) {
  const std::size_t count = curve.size();
  if (count < kMinProfileSamples) {
    throw Error(ErrorCode::UnderResolved, "profile has " + std::to_string(count) + " samples, need " +
                                              std::to_string(kMinProfileSamples));
  }
  const double sigma = orientation_sign(orientation);
  const double parallel_count = kind == SurfaceKind::Rotational ? n - 1 : 0;

  CurvatureData out;
  out.s.resize(count);
  out.kappa_profile.assign(curve.curvature().begin(), curve.curvature().end());
  out.kappa_parallel.assign(count, 0.0);
  out.H.resize(count);
  out.A_norm2.resize(count);
  out.position_normal.resize(count);

  for (std::size_t i = 0; i < count; ++i) {
    out.s[i] = curve.s(i);
    const Vec2 x = curve.position(i);
    const Vec2 t = curve.tangent(i);
    if (kind == SurfaceKind::Rotational) {
      const double r = x.x;
      if (r < -kAxisRadius) throw Error(ErrorCode::AxisTouch, "profile crosses to r < 0");
      if (r <= kAxisRadius) {
        if (std::abs(t.y) > kCapSlope) {
          throw Error(ErrorCode::AxisTouch, "profile reaches the axis without a perpendicular cap");
        }
        out.kappa_parallel[i] = out.kappa_profile[i];  // umbilic at the pole
      } else {
        out.kappa_parallel[i] = t.y / r;
      }
    }
    const double k1 = out.kappa_profile[i];
    const double k2 = out.kappa_parallel[i];
    // H n = -(sum of principal curvatures) N, with n = sigma N.
    out.H[i] = -sigma * (k1 + parallel_count * k2);
    out.A_norm2[i] = k1 * k1 + parallel_count * k2 * k2;
    out.position_normal[i] = sigma * dot(x, curve.normal(i));
  }

  const auto dk1 = derivative(out.kappa_profile, curve.ds());
  const auto dk2 = derivative(out.kappa_parallel, curve.ds());
  out.A_grad_norm2.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Rotational: (nabla_1 A)_11, (nabla_1 A)_jj and the two Codazzi-equal
    // mixed components (nabla_j A)_1j, (nabla_j A)_j1 per parallel direction.
    out.A_grad_norm2[i] = dk1[i] * dk1[i] + 3.0 * parallel_count * dk2[i] * dk2[i];
  }
  return out;
}

CurvatureData curvature_of(const ExpanderSurface& surface) {
  validate(surface);
  if (!surface.orientation) throw Error(ErrorCode::OrientationUnset, "surface has no normal orientation");
  return curvature_of_profile(sampling_profile(surface), surface.kind, surface.n, *surface.orientation);
}

std::vector<double> expander_residual(const ExpanderSurface& surface) {
  const auto c = curvature_of(surface);
  std::vector<double> r(c.H.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c.H[i] + 0.5 * c.position_normal[i];
  return r;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(v));
  }
  return m;
}

double default_residual_tolerance(SurfaceKind kind) {
  return kind == SurfaceKind::Hyperplane ? kHyperplaneResidualTol : kShotResidualTol;
}

bool accepted_as_expander(const ExpanderSurface& surface, double tol) {
  // Flipping the orientation negates the residual, so max|r| is already
  // the minimum over both signs.
  return max_abs(expander_residual(surface)) <= tol;
}

bool accepted_as_expander(const ExpanderSurface& surface) {
  return accepted_as_expander(surface, default_residual_tolerance(surface.kind));
}

MeanConvexity classify_mean_convexity(const ExpanderSurface& surface, double flat_tol) {
  const auto c = curvature_of(surface);
  if (max_abs(c.H) <= flat_tol) return MeanConvexity::Flat;
  const bool nonneg = std::all_of(c.H.begin(), c.H.end(), [](double h) { return h >= 0.0; });
  const bool nonpos = std::all_of(c.H.begin(), c.H.end(), [](double h) { return h <= 0.0; });
  return (nonneg || nonpos) ? MeanConvexity::MeanConvex : MeanConvexity::NotMeanConvex;
}

ExpanderSurface with_normalized_orientation(ExpanderSurface surface) {
  if (!surface.orientation) surface.orientation = Orientation::NegativeN;
  const auto c = curvature_of(surface);
  double sum = 0.0;
  for (double h : c.H) sum += h;
  if (sum < 0.0) surface.orientation = flipped(*surface.orientation);
  return surface;
}

double weighted_A2_integral(const ExpanderSurface& surface, double R) {
  validate(surface);
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  if (surface.kind == SurfaceKind::Hyperplane) return 0.0;

  const auto& profile = *surface.profile;
  const auto curv = curvature_of(surface);
  const double s_base = base_arclength(surface);
  double lower = s_base - R;
  const double upper = s_base + R;
  const double slack = 1e-9 * std::max(1.0, R);
  if (lower < profile.s0() - slack) {
    if (surface.kind == SurfaceKind::Rotational && starts_on_axis(profile)) {
      lower = profile.s0();
    } else {
      throw Error(ErrorCode::UnderResolved, "profile does not reach arclength s_base - R");
    }
  }
  if (upper > profile.s_end() + slack) {
    throw Error(ErrorCode::UnderResolved, "profile does not reach arclength s_base + R");
  }

  std::optional<FlatBallIntegral> flat;
  if (surface.kind == SurfaceKind::CurveCylinder) flat.emplace(surface.n - 1, R);
  const double sphere = unit_sphere_area(surface.n - 1);

  auto integrand = [&](std::size_t i) {
    const Vec2 x = profile.position(i);
    const double weight = checked_exp(0.25 * dot(x, x));
    double value = curv.A_norm2[i] * weight;
    if (flat) {
      const double d = curv.s[i] - s_base;
      value *= (*flat)(std::sqrt(std::max(0.0, R * R - d * d)));
    } else {
      value *= sphere * std::pow(std::max(0.0, x.x), surface.n - 1);
    }
    return value;
  };

  // Trapezoid over the samples inside [lower, upper], plus linearly
  // interpolated partial cells at both ends.
  const double ds = profile.ds();
  const auto first = static_cast<std::size_t>(std::ceil((lower - profile.s0()) / ds - 1e-9));
  const auto last = std::min(profile.size() - 1,
                             static_cast<std::size_t>(std::floor((upper - profile.s0()) / ds + 1e-9)));
  double total = 0.0;
  double prev = integrand(first);
  for (std::size_t i = first + 1; i <= last; ++i) {
    const double cur = integrand(i);
    total += 0.5 * ds * (prev + cur);
    prev = cur;
  }
  const double head = profile.s(first) - lower;
  if (head > 0.0 && first > 0) {
    const double w = head / ds;
    const double edge = (1.0 - w) * integrand(first) + w * integrand(first - 1);
    total += 0.5 * head * (edge + integrand(first));
  }
  const double tail = upper - profile.s(last);
  if (tail > 0.0 && last + 1 < profile.size()) {
    const double w = tail / ds;
    const double edge = (1.0 - w) * integrand(last) + w * integrand(last + 1);
    total += 0.5 * tail * (edge + integrand(last));
  }
  if (!std::isfinite(total)) throw Error(ErrorCode::Overflow, "weighted |A|^2 integral overflowed");
  return total;
}

}  // namespace expanderlab
