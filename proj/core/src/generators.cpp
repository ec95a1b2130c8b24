#include "expanderlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "expanderlab/error.hpp"
#include "expanderlab/ode.hpp"
#include "expanderlab/parallel.hpp"

namespace expanderlab {

namespace {

constexpr double kBlowUpRadius = 1e6;

using State = ode::State<4>;  // (x, y, alpha, k)

struct Trajectory {
  std::vector<Vec2> x;
  std::vector<Vec2> t;
  std::vector<double> k;

  void push(const State& y) {
    x.push_back({y[0], y[1]});
    t.push_back({std::cos(y[2]), std::sin(y[2])});
    k.push_back(y[3]);
  }
};

void check_bounded(const State& y) {
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::BlowUp, "non-finite state during shooting");
  }
  if (std::hypot(y[0], y[1]) > kBlowUpRadius) throw Error(ErrorCode::BlowUp, "|x| exceeded 1e6");
}

std::size_t step_count(const ShootingConfig& c) {
  return static_cast<std::size_t>(std::llround(c.s_max / c.ds));
}

/// Integrates `steps` steps of size h (possibly negative) and returns the
/// states after each step. Each step is split into substeps(y) equal parts.
template <class Rhs, class Guard, class Substeps>
std::vector<State> integrate(const Rhs& rhs, const Guard& guard, const Substeps& substeps, State y, double s,
                             double h, std::size_t steps, int order) {
  std::vector<State> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const int parts = substeps(y);
    const double sub = h / parts;
    for (int j = 0; j < parts; ++j) y = ode::step<4>(order, rhs, s + j * sub, y, sub);
    s += h;
    check_bounded(y);
    guard(y);
    out.push_back(y);
  }
  return out;
}

ProfileCurve two_sided_profile(const std::vector<State>& backward, const State& start,
                               const std::vector<State>& forward, double ds) {
  Trajectory tr;
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) tr.push(*it);
  tr.push(start);
  for (const auto& y : forward) tr.push(y);
  const double s0 = -static_cast<double>(backward.size()) * ds;
  return ProfileCurve(s0, ds, std::move(tr.x), std::move(tr.t), std::move(tr.k));
}

void require_residual(const ExpanderSurface& surface, double tol) {
  const double r = max_abs(expander_residual(surface));
  if (!(r <= tol)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "max residual %.3e exceeds tolerance %.3e", r, tol);
    throw Error(ErrorCode::ResidualExceeded, buf);
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void ShootingConfig::validate() const {
  if (!(ds > 0.0)) throw Error(ErrorCode::InvalidInput, "ds must be positive");
  if (!(s_max >= 100.0 * ds)) throw Error(ErrorCode::InvalidInput, "s_max must be at least 100 ds");
  if (!(tol_residual > 0.0)) throw Error(ErrorCode::InvalidInput, "tol_residual must be positive");
  if (!(d0 >= 0.0)) throw Error(ErrorCode::InvalidInput, "d0 must be non-negative");
  if (!std::isfinite(theta0)) throw Error(ErrorCode::InvalidInput, "theta0 must be finite");
  if (integrator_order != 2 && integrator_order != 4) {
    throw Error(ErrorCode::InvalidInput, "integrator_order must be 2 or 4");
  }
}

ExpanderSurface make_hyperplane(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "hyperplane dimension must be >= 1");
  ExpanderSurface s;
  s.kind = SurfaceKind::Hyperplane;
  s.n = n;
  s.orientation = Orientation::NegativeN;
  return s;
}

ProfileCurve shoot_expander_curve(const ShootingConfig& config) {
  config.validate();
  auto rhs = [](double, const State& y) -> State {
    const double c = std::cos(y[2]);
    const double s = std::sin(y[2]);
    const double radial = y[0] * c + y[1] * s;  // <gamma, T>
    return {c, s, y[3], -0.5 * y[3] * radial};
  };
  auto no_guard = [](const State&) {};
  auto single = [](const State&) { return 1; };

  const double alpha0 = config.theta0;
  // k(0) = <gamma(0), N(0)>/2 with gamma(0) = (d0, 0), N = (-sin, cos).
  const State start{config.d0, 0.0, alpha0, -0.5 * config.d0 * std::sin(alpha0)};
  const std::size_t steps = step_count(config);
  const auto forward = integrate(rhs, no_guard, single, start, 0.0, config.ds, steps, config.integrator_order);
  const auto backward = integrate(rhs, no_guard, single, start, 0.0, -config.ds, steps, config.integrator_order);
  ProfileCurve curve = two_sided_profile(backward, start, forward, config.ds);

  ExpanderSurface probe;
  probe.kind = SurfaceKind::CurveCylinder;
  probe.n = 2;
  probe.profile = curve;
  require_residual(probe, config.tol_residual);
  return curve;
}

ExpanderSurface make_curve_cylinder(ProfileCurve curve, int n) {
  ExpanderSurface s;
  s.kind = SurfaceKind::CurveCylinder;
  s.n = n;
  s.profile = std::move(curve);
  validate(s);
  return with_normalized_orientation(std::move(s));
}

ExpanderSurface shoot_rotational_expander(const ShootingConfig& config, int n, RotationalStart start) {
  config.validate();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "rotational expanders need n >= 2");
  const double m = n - 1;
  auto rhs = [m](double, const State& y) -> State {
    const double c = std::cos(y[2]);
    const double s = std::sin(y[2]);
    const double r = y[0];
    const double radial = r * c + y[1] * s;  // <x, T>
    const double dk = -0.5 * y[3] * radial - m * c * (y[3] * r - s) / (r * r);
    return {c, s, y[3], dk};
  };
  const double min_r = 0.5 * config.ds;
  // The (n-1)/r terms blow up the one-step error near the axis, which shows
  // as a kink in second differences of the samples; substeps below r = 1/4
  // keep the sampled curvature smooth there.
  auto near_axis = [](const State& y) {
    return static_cast<int>(std::clamp(std::ceil(0.25 / std::abs(y[0])), 1.0, 64.0));
  };
  auto off_axis = [min_r](const State& y) {
    if (y[0] < min_r) throw Error(ErrorCode::AxisSingularity, "profile reached the axis away from a cap start");
  };

  const std::size_t steps = step_count(config);
  ExpanderSurface surface;
  surface.kind = SurfaceKind::Rotational;
  surface.n = n;

  if (start == RotationalStart::Cap) {
    if (std::abs(config.theta0 - std::numbers::pi / 2) > 1e-12) {
      throw Error(ErrorCode::AxisSingularity, "a cap start must leave the axis perpendicularly (theta0 = pi/2)");
    }
    const double u0 = config.d0;
    const double a1 = u0 / (2.0 * n);
    const double a3 = -a1 * (1.0 + u0 * a1) / (4.0 * (n + 2));
    const double h = config.ds;
    // Series solution at the pole: alpha odd, r odd, z even in s.
    const State pole{0.0, u0, 0.0, a1};
    const State first{h - a1 * a1 * std::pow(h, 3) / 6.0 + (std::pow(a1, 4) / 24.0 - a1 * a3) * std::pow(h, 5) / 5.0,
                      u0 + 0.5 * a1 * h * h + 0.25 * (a3 - std::pow(a1, 3) / 6.0) * std::pow(h, 4),
                      a1 * h + a3 * std::pow(h, 3), a1 + 3.0 * a3 * h * h};
    auto rest = integrate(rhs, off_axis, near_axis, first, h, h, steps - 1, config.integrator_order);
    Trajectory tr;
    tr.push(pole);
    tr.push(first);
    for (const auto& y : rest) tr.push(y);
    surface.profile = ProfileCurve(0.0, h, std::move(tr.x), std::move(tr.t), std::move(tr.k));
  } else {
    if (!(config.d0 > 0.0)) throw Error(ErrorCode::AxisSingularity, "off-axis start needs d0 > 0");
    // theta0 is measured from the axis: T = (sin theta0, cos theta0).
    const double alpha0 = std::numbers::pi / 2 - config.theta0;
    const double r0 = config.d0;
    // k(0) = <x, N>/2 - (n-1) sin(alpha)/r with x = (r0, 0), N = (-sin, cos).
    const State init{r0, 0.0, alpha0, -0.5 * r0 * std::sin(alpha0) - m * std::sin(alpha0) / r0};
    const auto forward = integrate(rhs, off_axis, near_axis, init, 0.0, config.ds, steps, config.integrator_order);
    const auto backward = integrate(rhs, off_axis, near_axis, init, 0.0, -config.ds, steps, config.integrator_order);
    surface.profile = two_sided_profile(backward, init, forward, config.ds);
  }

  surface = with_normalized_orientation(std::move(surface));
  require_residual(surface, config.tol_residual);
  return surface;
}

ExpanderSurface make_circle_control(double ds) {
  const auto count = static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi / ds));
  std::vector<Vec2> x(count), t(count);
  std::vector<double> k(count, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = static_cast<double>(i) * ds;
    x[i] = {std::cos(a), std::sin(a)};
    t[i] = {-std::sin(a), std::cos(a)};
  }
  ExpanderSurface s;
  s.kind = SurfaceKind::CurveCylinder;
  s.n = 2;
  s.profile = ProfileCurve(0.0, ds, std::move(x), std::move(t), std::move(k));
  s.orientation = Orientation::NegativeN;  // outward
  return s;
}

ExpanderSurface make_rescaled_control(const ExpanderSurface& surface, double c) {
  validate(surface);
  ExpanderSurface out = surface;
  if (out.profile) out.profile = out.profile->scaled(c);
  return out;
}

double asymptotic_cone_angle(const ExpanderSurface& surface) {
  validate(surface);
  if (surface.kind == SurfaceKind::Hyperplane) return std::numbers::pi;
  const auto& p = *surface.profile;
  const Vec2 t_end = p.tangent(p.size() - 1);
  if (surface.kind == SurfaceKind::Rotational) return std::atan2(std::abs(t_end.x), t_end.y);
  const Vec2 t_start = p.tangent(0);
  const double c = std::clamp(dot(t_end, -1.0 * t_start), -1.0, 1.0);
  return std::acos(c);
}

SweepMember describe_member(std::string id, std::string kind, int n, const ShootingConfig& config,
                            MemberRole role, ExpanderSurface surface) {
  SweepMember m;
  m.id = std::move(id);
  m.kind = std::move(kind);
  m.n = n;
  m.config = config;
  m.role = role;
  m.residual_max = max_abs(expander_residual(surface));
  m.convexity = classify_mean_convexity(surface);
  m.cone_angle = asymptotic_cone_angle(surface);
  m.surface = std::move(surface);
  return m;
}

std::vector<SweepMember> negative_controls(double ds) {
  std::vector<SweepMember> out;
  ShootingConfig base;
  base.ds = ds;
  out.push_back(describe_member("control_circle", "circle", 2, base, MemberRole::NegativeControl,
                                make_circle_control(ds)));
  ShootingConfig cfg = base;
  cfg.d0 = 1.0;
  const auto expander = make_curve_cylinder(shoot_expander_curve(cfg), 2);
  out.push_back(describe_member("control_rescaled_1.5", "rescaled", 2, cfg, MemberRole::NegativeControl,
                                make_rescaled_control(expander, 1.5)));
  return out;
}

std::string member_id(const std::string& kind, int n, const ShootingConfig& config) {
  if (kind == "hyperplane") return "hyperplane_" + std::to_string(n);
  if (kind == "curve") {
    std::string id = "curve_d0_" + format_number(config.d0);
    if (std::abs(config.theta0 - std::numbers::pi / 2) > 1e-6) id += "_theta" + format_number(config.theta0);
    return id;
  }
  if (kind == "rotational") return "rotational_n" + std::to_string(n) + "_h" + format_number(config.d0);
  if (kind == "rotational_offaxis") {
    return "rotational_n" + std::to_string(n) + "_r" + format_number(config.d0) + "_theta" +
           format_number(config.theta0);
  }
  throw Error(ErrorCode::InvalidInput, "unknown member kind '" + kind + "'");
}

std::vector<SweepMember> generate_sweep(const SweepSpec& spec, int threads) {
  struct Job {
    std::string id;
    std::string kind;
    int n;
    ShootingConfig config;
  };
  std::vector<Job> jobs;
  ShootingConfig base;
  base.ds = spec.ds;
  base.s_max = spec.s_max;
  for (double d0 : spec.curve_d0) {
    ShootingConfig c = base;
    c.d0 = d0;
    c.theta0 = spec.curve_theta0;
    jobs.push_back({member_id("curve", spec.curve_n, c), "curve", spec.curve_n, c});
  }
  for (double h : spec.rotational_cap_heights) {
    ShootingConfig c = base;
    c.d0 = h;
    jobs.push_back({member_id("rotational", spec.rotational_n, c), "rotational", spec.rotational_n, c});
  }
  for (int n : spec.hyperplane_dims) jobs.push_back({member_id("hyperplane", n, base), "hyperplane", n, base});

  std::vector<SweepMember> members(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    ExpanderSurface s;
    if (j.kind == "curve") {
      s = make_curve_cylinder(shoot_expander_curve(j.config), j.n);
    } else if (j.kind == "rotational") {
      s = shoot_rotational_expander(j.config, j.n);
    } else {
      s = make_hyperplane(j.n);
    }
    members[i] = describe_member(j.id, j.kind, j.n, j.config, MemberRole::Member, std::move(s));
  });
  if (spec.include_negative_controls) {
    for (auto& c : negative_controls(spec.ds)) members.push_back(std::move(c));
  }
  return members;
}

}  // namespace expanderlab
