#include "expanderlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <map>
#include <optional>

#include "expanderlab/error.hpp"
#include "expanderlab/json_writer.hpp"
#include "expanderlab/parallel.hpp"

namespace expanderlab {

namespace {

constexpr double kA2Radii[] = {2.0, 4.0, 6.0, 8.0};
// (8/4)^2 * 10: superquadratic growth of I(R) between R = 4 and R = 8.
constexpr double kA2RatioThreshold = 40.0;
// Central differences of r carry an O(h^2 / r) error against the (n-1)/r
// term of the radial coordinate identity, so it is checked outside a fixed
// collar around the pole.
constexpr double kPoleCollar = 0.05;

bool is_flat(const SweepMember& m) { return m.convexity == MeanConvexity::Flat; }

double min_h2(const CurvatureData& cd) {
  double m = std::numeric_limits<double>::infinity();
  for (double h : cd.H) m = std::min(m, h * h);
  return m;
}

CheckRecord start(const char* name, const SweepMember& m) {
  CheckRecord r;
  r.name = name;
  r.surface = m.id;
  r.expected_fail = m.role == MemberRole::NegativeControl;
  return r;
}

double ratio_or_zero(double coarse, double fine) { return fine > 0.0 ? coarse / fine : 0.0; }

ProfileCurve check_profile(const ExpanderSurface& s) { return sampling_profile(s); }

}  // namespace

double CheckRecord::measured_value(const std::string& key) const {
  for (const auto& v : measured) {
    if (v.name == key) return v.value;
  }
  throw Error(ErrorCode::InvalidInput, "check " + name + " has no measured value '" + key + "'");
}

const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names = {kCheckA2Growth,    kCheckCoordinate, kCheckResidual, kCheckGroundState,
                                                 kCheckLambda1,     kCheckMu1,        kCheckSimons};
  return names;
}

std::string resolve_check_name(const std::string& name) {
  static const std::map<std::string, std::string> alias = {
      {"residual", kCheckResidual},       {"lambda1", kCheckLambda1},       {"mu1", kCheckMu1},
      {"simons", kCheckSimons},           {"coordinate", kCheckCoordinate}, {"ground_state", kCheckGroundState},
      {"a2_growth", kCheckA2Growth},
  };
  if (auto it = alias.find(name); it != alias.end()) return it->second;
  const auto& all = all_check_names();
  if (std::find(all.begin(), all.end(), name) != all.end()) return name;
  throw Error(ErrorCode::InvalidInput, "unknown check '" + name + "'");
}

SurfaceSpectra compute_spectra(const ExpanderSurface& surface, const GridOptions& grid) {
  return {bottom_spectrum(ground_state_transform(surface, PotentialKind::DriftOnly, grid), 1),
          bottom_spectrum(ground_state_transform(surface, PotentialKind::Stability, grid), 1)};
}

IdentityResiduals identity_residuals(const ExpanderSurface& surface, const ProfileCurve& profile) {
  const auto orientation = surface.orientation.value_or(Orientation::NegativeN);
  const auto cd = curvature_of_profile(profile, surface.kind, surface.n, orientation);
  const bool rotational = surface.kind == SurfaceKind::Rotational;
  const double m = rotational ? surface.n - 1 : 0.0;
  const double h = profile.ds();
  const std::size_t count = profile.size();

  std::vector<double> drift(count), xs(count), ys(count), v(count), a_norm(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec2 x = profile.position(i);
    const Vec2 t = profile.tangent(i);
    drift[i] = 0.5 * dot(x, t);
    if (rotational && x.x > 0.0) drift[i] += m * t.x / x.x;
    xs[i] = x.x;
    ys[i] = x.y;
    v[i] = std::exp(-0.25 * dot(x, x));
    a_norm[i] = std::sqrt(cd.A_norm2[i]);
  }
  // The drifted Laplacian of a function of the profile parameter.
  auto drifted = [&](const std::vector<double>& f) {
    const auto d1 = derivative(f, h);
    const auto d2 = second_derivative(f, h);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = d2[i] + drift[i] * d1[i];
    return out;
  };
  const auto LH = drifted(cd.H);
  const auto LA2 = drifted(cd.A_norm2);
  const auto Lx = drifted(xs);
  const auto Ly = drifted(ys);
  const auto Lv = drifted(v);
  const auto dA = derivative(a_norm, h);
  // Share of the ground-state eigenvalue n/2 carried by the profile factor.
  const double share = rotational ? 0.5 * surface.n : 0.5;

  IdentityResiduals out;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double a2 = cd.A_norm2[i];
    const double H = cd.H[i];
    out.simons_H = std::max(out.simons_H, std::abs(LH[i] + (a2 + 0.5) * H));
    out.simons_A = std::max(out.simons_A, std::abs(0.5 * LA2[i] - (cd.A_grad_norm2[i] - 0.5 * a2 - a2 * a2)));
    double coord = std::abs(Ly[i] - 0.5 * ys[i]);
    if (rotational) {
      if (xs[i] >= kPoleCollar) coord = std::max(coord, std::abs(Lx[i] - m / xs[i] - 0.5 * xs[i]));
    } else {
      coord = std::max(coord, std::abs(Lx[i] - 0.5 * xs[i]));
    }
    out.coordinate = std::max(out.coordinate, coord);
    out.ground_state = std::max(out.ground_state, std::abs(Lv[i] + (share + H * H) * v[i]));
    out.grad_A_gap = std::max(out.grad_A_gap, std::abs(cd.A_grad_norm2[i] - dA[i] * dA[i]));
  }
  return out;
}

CheckRecord check_expander_residual(const SweepMember& member) {
  auto r = start(kCheckResidual, member);
  const double tol = default_residual_tolerance(member.surface.kind);
  r.measured = {{"max_abs_residual", member.residual_max}};
  r.bound = {{"max_abs_residual", tol}};
  r.margin = tol - member.residual_max;
  r.tolerance = 0.0;
  r.pass = r.margin >= 0.0;
  return r;
}

CheckRecord check_lambda1_lower_bound(const SweepMember& member, const SurfaceSpectra& spectra,
                                      const VerifyOptions& options) {
  auto r = start(kCheckLambda1, member);
  const auto& s = member.surface;
  const double lambda1 = spectra.drift.eigenvalues.at(0);
  const double err = spectra.drift.richardson.empty() ? 0.0 : spectra.drift.richardson[0];
  const double half_n = 0.5 * s.n;
  r.tolerance = std::max(options.equality_floor, options.richardson_factor * err);

  const auto profile = check_profile(s);
  const auto cd = curvature_of_profile(profile, s.kind, s.n, s.orientation.value_or(Orientation::NegativeN));
  const double inf_h2 = min_h2(cd);
  const double end_h2 = cd.H.back() * cd.H.back();
  const bool axis_start = s.kind == SurfaceKind::Rotational && std::abs(profile.position(0).x) <= 1e-9;
  const double start_h2 = axis_start ? 0.0 : cd.H.front() * cd.H.front();
  const double a_max = std::sqrt(*std::max_element(cd.A_norm2.begin(), cd.A_norm2.end()));

  r.measured = {{"lambda1", lambda1},
                {"richardson", err},
                {"inf_H2", inf_h2},
                {"boundary_H2", std::max(start_h2, end_h2)},
                {"profile_extent", profile.s_end() - profile.s0()},
                {"max_abs_A", a_max},
                {"lambda1_minus_half_n", lambda1 - half_n}};
  r.bound = {{"half_n", half_n}, {"half_n_plus_inf_H2", half_n + inf_h2}};
  if (is_flat(member)) {
    // Equality case: lambda1 = n/2 exactly on the flat example.
    r.margin = r.tolerance - std::abs(lambda1 - half_n);
    r.pass = std::abs(lambda1 - half_n) <= options.equality_floor;
    r.note = "flat: equality case";
  } else {
    r.margin = lambda1 - half_n - inf_h2;
    const bool strict = lambda1 - half_n > err;
    r.pass = r.margin >= -r.tolerance && strict;
    r.note = strict ? "nonflat: strict inequality" : "nonflat: gap not resolved beyond the error estimate";
  }
  return r;
}

CheckRecord check_mu1_inequality(const SweepMember& member, const SurfaceSpectra& spectra,
                                 const VerifyOptions& options) {
  auto r = start(kCheckMu1, member);
  const auto& s = member.surface;
  const double lambda1 = spectra.drift.eigenvalues.at(0);
  const double mu1 = spectra.stability.eigenvalues.at(0);
  const double err_l = spectra.drift.richardson.empty() ? 0.0 : spectra.drift.richardson[0];
  const double err_m = spectra.stability.richardson.empty() ? 0.0 : spectra.stability.richardson[0];
  const double err = err_l + err_m;
  const double gap = lambda1 + 0.5 - mu1;
  r.tolerance = std::max(options.equality_floor, options.richardson_factor * err);
  r.measured = {{"mu1", mu1}, {"lambda1_plus_half", lambda1 + 0.5}, {"gap", gap}, {"richardson", err}};
  r.bound = {{"lambda1_plus_half", lambda1 + 0.5}};
  r.margin = gap;

  if (s.kind == SurfaceKind::Hyperplane) {
    const double expected = 0.5 * (s.n + 1);
    r.bound.push_back({"half_n_plus_half", expected});
    r.margin = r.tolerance - std::abs(mu1 - expected);
    r.pass = std::abs(mu1 - expected) <= options.equality_floor && std::abs(gap) <= r.tolerance;
    r.note = "hyperplane: equality case";
    return r;
  }
  r.pass = gap >= -r.tolerance;
  if (is_flat(member)) {
    r.note = "flat";
    return r;
  }
  const bool strict = gap > err;
  r.pass = r.pass && strict;
  r.note = strict ? "nonflat: strict inequality" : "nonflat: gap not resolved beyond the error estimate";
  if (member.convexity == MeanConvexity::MeanConvex) {
    // Both candidate lower bounds are reported; only mu1 >= 0 is required.
    r.measured.push_back({"mu1_minus_half", mu1 - 0.5});
    r.measured.push_back({"mu1_minus_one", mu1 - 1.0});
    r.measured.push_back({"holds_half", mu1 >= 0.5 - r.tolerance ? 1.0 : 0.0});
    r.measured.push_back({"holds_one", mu1 >= 1.0 - r.tolerance ? 1.0 : 0.0});
    r.bound.push_back({"mean_convex_stability", 0.0});
    r.pass = r.pass && mu1 >= -r.tolerance;
  }
  return r;
}

namespace {

struct IdentityPair {
  IdentityResiduals fine;
  IdentityResiduals coarse;
  double ds = 0.0;
};

IdentityPair identity_pair(const SweepMember& member) {
  const auto profile = check_profile(member.surface);
  return {identity_residuals(member.surface, profile), identity_residuals(member.surface, profile.coarsened()),
          profile.ds()};
}

}  // namespace

CheckRecord check_simons_identities(const SweepMember& member, const VerifyOptions& options) {
  auto r = start(kCheckSimons, member);
  const auto p = identity_pair(member);
  r.tolerance = options.fd_constant * p.ds * p.ds;
  r.measured = {{"simons_H", p.fine.simons_H},
                {"simons_A", p.fine.simons_A},
                {"simons_H_coarse", p.coarse.simons_H},
                {"simons_A_coarse", p.coarse.simons_A},
                {"ratio_H", ratio_or_zero(p.coarse.simons_H, p.fine.simons_H)},
                {"ratio_A", ratio_or_zero(p.coarse.simons_A, p.fine.simons_A)},
                {"grad_A_minus_grad_abs_A", p.fine.grad_A_gap},
                {"ds", p.ds}};
  r.bound = {{"max_residual", r.tolerance}};
  r.margin = r.tolerance - std::max(p.fine.simons_H, p.fine.simons_A);
  r.pass = r.margin >= 0.0;
  return r;
}

CheckRecord check_coordinate_eigenfunctions(const SweepMember& member, const VerifyOptions& options) {
  auto r = start(kCheckCoordinate, member);
  const auto p = identity_pair(member);
  r.tolerance = options.fd_constant * p.ds * p.ds;
  r.measured = {{"residual", p.fine.coordinate},
                {"residual_coarse", p.coarse.coordinate},
                {"ratio", ratio_or_zero(p.coarse.coordinate, p.fine.coordinate)},
                {"ds", p.ds}};
  r.bound = {{"max_residual", r.tolerance}};
  r.margin = r.tolerance - p.fine.coordinate;
  r.pass = r.margin >= 0.0;
  return r;
}

CheckRecord check_ground_state_equation(const SweepMember& member, const VerifyOptions& options) {
  auto r = start(kCheckGroundState, member);
  const auto p = identity_pair(member);
  r.tolerance = options.fd_constant * p.ds * p.ds;
  r.measured = {{"residual", p.fine.ground_state},
                {"residual_coarse", p.coarse.ground_state},
                {"ratio", ratio_or_zero(p.coarse.ground_state, p.fine.ground_state)},
                {"ds", p.ds}};
  r.bound = {{"max_residual", r.tolerance}};
  r.margin = r.tolerance - p.fine.ground_state;
  r.pass = r.margin >= 0.0;
  return r;
}

CheckRecord check_a2_weighted_growth(const SweepMember& member) {
  auto r = start(kCheckA2Growth, member);
  std::vector<double> values;
  for (double R : kA2Radii) {
    values.push_back(weighted_A2_integral(member.surface, R));
    r.measured.push_back({"I_R" + format_double(R), values.back()});
  }
  r.bound = {{"I8_over_I4", kA2RatioThreshold}};
  if (member.convexity != MeanConvexity::MeanConvex) {
    r.pass = true;
    r.margin = 0.0;
    r.note = is_flat(member) ? "flat: |A| vanishes" : "not mean-convex: not applicable";
    return r;
  }
  const double ratio = values[1] > 0.0 ? values[3] / values[1] : 0.0;  // I(8) / I(4)
  bool quad = true;
  bool quad_log = true;
  double prev_quad = 0.0;
  double prev_log = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double R = kA2Radii[i];
    const double q = values[i] / (R * R);
    const double ql = values[i] / (R * R * std::log(R));
    r.measured.push_back({"I_over_R2_R" + format_double(R), q});
    r.measured.push_back({"I_over_R2logR_R" + format_double(R), ql});
    if (i > 0) {
      quad = quad && q > prev_quad;
      quad_log = quad_log && ql > prev_log;
    }
    prev_quad = q;
    prev_log = ql;
  }
  r.measured.push_back({"I8_over_I4", ratio});
  r.measured.push_back({"increasing_over_R2", quad ? 1.0 : 0.0});
  r.measured.push_back({"increasing_over_R2logR", quad_log ? 1.0 : 0.0});
  r.margin = ratio - kA2RatioThreshold;
  r.pass = r.margin > 0.0 && quad && quad_log;
  r.note = "nonflat mean-convex: growth faster than both gauges";
  return r;
}

std::size_t VerificationReport::unexpected() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.ok(); }));
}

VerificationReport run_full_suite(const std::vector<SweepMember>& members, const VerifyOptions& options) {
  std::vector<std::string> selected;
  for (const auto& c : options.checks) selected.push_back(resolve_check_name(c));
  auto wanted = [&](const std::string& name) {
    return selected.empty() || std::find(selected.begin(), selected.end(), name) != selected.end();
  };

  std::vector<std::vector<CheckRecord>> per_member(members.size());
  parallel_for(members.size(), options.threads, [&](std::size_t i) {
    const auto& m = members[i];
    auto& out = per_member[i];
    auto guarded = [&](const char* name, auto&& fn) {
      if (!wanted(name)) return;
      try {
        out.push_back(fn());
      } catch (const std::exception& e) {
        auto r = start(name, m);
        r.pass = false;
        r.note = e.what();
        out.push_back(std::move(r));
      }
    };
    guarded(kCheckResidual, [&] { return check_expander_residual(m); });
    guarded(kCheckCoordinate, [&] { return check_coordinate_eigenfunctions(m, options); });
    if (m.role == MemberRole::NegativeControl) return;  // the other checks presuppose an expander

    std::optional<SurfaceSpectra> spectra;
    std::string spectra_error;
    if (wanted(kCheckLambda1) || wanted(kCheckMu1)) {
      try {
        spectra = compute_spectra(m.surface, options.grid);
      } catch (const std::exception& e) {
        spectra_error = e.what();
      }
    }
    auto need_spectra = [&]() -> const SurfaceSpectra& {
      if (!spectra) throw Error(ErrorCode::SpectrumUnavailable, spectra_error);
      return *spectra;
    };
    guarded(kCheckLambda1, [&] { return check_lambda1_lower_bound(m, need_spectra(), options); });
    guarded(kCheckMu1, [&] { return check_mu1_inequality(m, need_spectra(), options); });
    guarded(kCheckSimons, [&] { return check_simons_identities(m, options); });
    guarded(kCheckGroundState, [&] { return check_ground_state_equation(m, options); });
    guarded(kCheckA2Growth, [&] { return check_a2_weighted_growth(m); });
  });

  VerificationReport report;
  report.grid_size = options.grid.grid_size;
  report.domain_radius = options.grid.domain_radius;
  report.timestamp = report_timestamp();
  for (auto& v : per_member) {
    for (auto& c : v) report.checks.push_back(std::move(c));
  }
  std::stable_sort(report.checks.begin(), report.checks.end(), [](const auto& a, const auto& b) {
    return a.surface != b.surface ? a.surface < b.surface : a.name < b.name;
  });
  return report;
}

std::string report_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (env == nullptr || *env == '\0') return "unset";
  char* end = nullptr;
  const long long secs = std::strtoll(env, &end, 10);
  if (end == nullptr || *end != '\0' || secs < 0) return "unset";
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string report_json(const VerificationReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("environment").begin_object();
  w.field("grid_size", report.grid_size);
  w.field("domain_radius", report.domain_radius);
  w.field("timestamp", report.timestamp);
  w.field("checks_total", report.checks.size());
  w.field("unexpected_failures", report.unexpected());
  w.end_object();
  w.key("checks").begin_array();
  for (const auto& c : report.checks) {
    w.begin_object();
    w.field("name", c.name);
    w.field("surface", c.surface);
    w.key("measured").begin_object();
    for (const auto& v : c.measured) w.field(v.name, v.value);
    w.end_object();
    w.key("bound").begin_object();
    for (const auto& v : c.bound) w.field(v.name, v.value);
    w.end_object();
    w.field("margin", c.margin);
    w.field("pass", c.pass);
    w.field("tolerance", c.tolerance);
    w.field("expected_fail", c.expected_fail);
    w.field("ok", c.ok());
    w.field("note", c.note);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string report_markdown(const VerificationReport& report) {
  std::string out = "# Verification report\n\n";
  out += "grid_size " + std::to_string(report.grid_size) + ", domain_radius " + format_double(report.domain_radius) +
         ", timestamp " + report.timestamp + "\n\n";
  out += "| surface | check | pass | expected fail | margin | tolerance | note |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& c : report.checks) {
    out += "| " + c.surface + " | " + c.name + " | " + (c.pass ? "yes" : "no") + " | " +
           (c.expected_fail ? "yes" : "no") + " | " + format_double(c.margin) + " | " + format_double(c.tolerance) +
           " | " + c.note + " |\n";
  }
  out += "\n" + std::to_string(report.checks.size()) + " checks, " + std::to_string(report.unexpected()) +
         " unexpected outcomes\n";
  return out;
}

}  // namespace expanderlab
