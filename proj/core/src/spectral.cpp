#include "expanderlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expanderlab/error.hpp"

namespace expanderlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Linear interpolation of profile data at arbitrary arclength.
class ProfileSampler {
 public:
  ProfileSampler(const ProfileCurve& curve, std::vector<double> a_norm2)
      : s0_(curve.s0()),
        ds_(curve.ds()),
        x_(curve.positions().begin(), curve.positions().end()),
        t_(curve.tangents().begin(), curve.tangents().end()),
        k_(curve.curvature().begin(), curve.curvature().end()),
        a2_(std::move(a_norm2)) {}

  struct Local {
    Vec2 x;
    Vec2 t;
    double k;
    double a2;
  };

  Local at(double s) const {
    const double u = (s - s0_) / ds_;
    const auto last = x_.size() - 1;
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(last - 1)));
    const double w = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    Local out;
    out.x = (1.0 - w) * x_[i] + w * x_[i + 1];
    const Vec2 t = (1.0 - w) * t_[i] + w * t_[i + 1];
    out.t = (1.0 / norm(t)) * t;
    out.k = (1.0 - w) * k_[i] + w * k_[i + 1];
    out.a2 = (1.0 - w) * a2_[i] + w * a2_[i + 1];
    return out;
  }

 private:
  double s0_;
  double ds_;
  std::vector<Vec2> x_;
  std::vector<Vec2> t_;
  std::vector<double> k_;
  std::vector<double> a2_;
};

std::shared_ptr<const ReducedFields> hyperplane_fields(PotentialKind kind) {
  const double q = kind == PotentialKind::Stability ? -0.5 : 0.0;
  auto f = std::make_shared<ReducedFields>();
  f->measure_log = [](double t) { return 0.25 * t * t; };
  f->weight_log = f->measure_log;
  f->potential = [q](double) { return q; };
  f->effective_potential = [q](double t) { return t * t / 16.0 + 0.25 - q; };
  return f;
}

std::shared_ptr<const ReducedFields> profile_fields(const ExpanderSurface& surface, PotentialKind kind,
                                                    double s_base) {
  const auto curv = curvature_of(surface);
  auto sampler = std::make_shared<const ProfileSampler>(*surface.profile, curv.A_norm2);
  const bool rotational = surface.kind == SurfaceKind::Rotational;
  const double m = rotational ? surface.n - 1 : 0.0;
  const bool stability = kind == PotentialKind::Stability;

  auto f = std::make_shared<ReducedFields>();
  f->weight_log = [sampler, s_base](double t) {
    const auto p = sampler->at(s_base + t);
    return 0.25 * dot(p.x, p.x);
  };
  f->measure_log = [sampler, s_base, m](double t) {
    const auto p = sampler->at(s_base + t);
    double w = 0.25 * dot(p.x, p.x);
    if (m > 0.0) w += m * std::log(p.x.x);
    return w;
  };
  f->potential = [sampler, s_base, stability](double t) {
    return stability ? sampler->at(s_base + t).a2 - 0.5 : 0.0;
  };
  f->effective_potential = [sampler, s_base, m, stability](double t) {
    const auto p = sampler->at(s_base + t);
    const Vec2 normal = rotate_quarter(p.t);
    double w1 = 0.5 * dot(p.x, p.t);
    double w2 = 0.5 * (1.0 + p.k * dot(p.x, normal));
    if (m > 0.0) {
      const double r = p.x.x;
      const double dr = p.t.x;
      const double d2r = p.k * normal.x;
      w1 += m * dr / r;
      w2 += m * (d2r / r - (dr / r) * (dr / r));
    }
    const double q = stability ? p.a2 - 0.5 : 0.0;
    return 0.25 * w1 * w1 + 0.5 * w2 - q;
  };
  return f;
}

double max_finite(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) {
    if (std::isfinite(x)) m = std::max(m, x);
  }
  return m;
}

double min_finite(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (std::isfinite(x)) m = std::min(m, x);
  }
  return m;
}

}  // namespace

const char* to_string(PotentialKind k) { return k == PotentialKind::DriftOnly ? "drift" : "stability"; }

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "drift") return PotentialKind::DriftOnly;
  if (name == "stability") return PotentialKind::Stability;
  throw Error(ErrorCode::InvalidInput, "unknown operator '" + name + "'");
}

const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::DirichletTruncated ? "dirichlet_truncated" : "neumann_cap";
}

WeightedOperator1D assemble_operator(std::shared_ptr<const ReducedFields> fields, BoundaryCondition bc,
                                     const GridOptions& grid, double flat_shift, PotentialKind kind, int n) {
  if (grid.grid_size < 3) throw Error(ErrorCode::InvalidInput, "grid needs at least 3 nodes");
  if (!(grid.domain_radius > 0.0)) throw Error(ErrorCode::InvalidInput, "domain radius must be positive");
  const std::size_t N = grid.grid_size;
  const double R = grid.domain_radius;

  WeightedOperator1D op;
  op.bc = bc;
  op.domain_radius = R;
  op.grid_size = N;
  op.flat_shift = flat_shift;
  op.kind = kind;
  op.n = n;

  if (bc == BoundaryCondition::DirichletTruncated) {
    // Nodes -R + j h, j = 0..N-1; the two end nodes carry u = 0.
    op.h = 2.0 * R / static_cast<double>(N - 1);
    for (std::size_t j = 1; j + 1 < N; ++j) op.grid.push_back(-R + static_cast<double>(j) * op.h);
    for (std::size_t j = 0; j + 1 < N; ++j) {
      op.measure_log_flux.push_back(fields->measure_log(-R + (static_cast<double>(j) + 0.5) * op.h));
    }
  } else {
    // Cell-centred nodes (j + 1/2) h, j = 0..N-1; the last one sits at R
    // and carries u = 0. No flux through the pole.
    op.h = R / (static_cast<double>(N) - 0.5);
    for (std::size_t j = 0; j + 1 < N; ++j) op.grid.push_back((static_cast<double>(j) + 0.5) * op.h);
    op.measure_log_flux.push_back(kNegInf);
    for (std::size_t j = 0; j + 1 < N; ++j) {
      op.measure_log_flux.push_back(fields->measure_log(static_cast<double>(j + 1) * op.h));
    }
  }
  for (double t : op.grid) {
    op.weight_log.push_back(fields->weight_log(t));
    op.measure_log.push_back(fields->measure_log(t));
    op.potential.push_back(fields->potential(t));
    op.effective_potential.push_back(fields->effective_potential(t));
  }
  for (double v : op.measure_log) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "measure density vanishes at an interior node");
  }
  op.fields = std::move(fields);
  return op;
}

SymmetricTridiagonal WeightedOperator1D::matrix() const {
  const std::size_t n = size();
  const double inv_h2 = 1.0 / (h * h);
  SymmetricTridiagonal t;
  t.diagonal.resize(n);
  t.off_diagonal.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = std::exp(measure_log_flux[i] - measure_log[i]);
    const double right = std::exp(measure_log_flux[i + 1] - measure_log[i]);
    t.diagonal[i] = (left + right) * inv_h2 - potential[i];
    if (i + 1 < n) {
      t.off_diagonal[i] = -std::exp(measure_log_flux[i + 1] - 0.5 * (measure_log[i] + measure_log[i + 1])) * inv_h2;
    }
  }
  return t;
}

WeightedOperator1D WeightedOperator1D::resampled(std::size_t new_size) const {
  return assemble_operator(fields, bc, GridOptions{new_size, domain_radius}, flat_shift, kind, n);
}

WeightedOperator1D ground_state_transform(const ExpanderSurface& surface, PotentialKind kind,
                                          const GridOptions& grid) {
  validate(surface);
  if (!surface.orientation) throw Error(ErrorCode::OrientationUnset, "surface has no normal orientation");
  const double R = grid.domain_radius;
  const double flat_shift = 0.5 * static_cast<double>(surface.n - 1);

  switch (surface.kind) {
    case SurfaceKind::Hyperplane:
      return assemble_operator(hyperplane_fields(kind), BoundaryCondition::DirichletTruncated, grid, flat_shift,
                               kind, surface.n);
    case SurfaceKind::CurveCylinder:
    case SurfaceKind::Rotational:
      break;
  }

  const auto& profile = *surface.profile;
  const std::size_t base = profile.nearest_to_origin();
  const double s_base = profile.s(base);
  const double slack = 1e-9 * std::max(1.0, R);
  if (s_base + R > profile.s_end() + slack) {
    throw Error(ErrorCode::UnderResolved, "profile ends before the spectral domain radius");
  }

  if (surface.kind == SurfaceKind::Rotational) {
    const bool pole = base == 0 && std::abs(profile.position(0).x) <= 1e-9;
    if (pole) {
      return assemble_operator(profile_fields(surface, kind, s_base), BoundaryCondition::NeumannCap, grid, 0.0,
                               kind, surface.n);
    }
  }
  if (s_base - R < profile.s0() - slack) {
    throw Error(ErrorCode::UnderResolved, "profile starts inside the spectral domain radius");
  }
  const double shift = surface.kind == SurfaceKind::CurveCylinder ? flat_shift : 0.0;
  return assemble_operator(profile_fields(surface, kind, s_base), BoundaryCondition::DirichletTruncated, grid,
                           shift, kind, surface.n);
}

SpectrumResult bottom_spectrum(const WeightedOperator1D& op, std::size_t m, const SpectrumOptions& options) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "need at least one eigenvalue");
  if (op.grid_size < 101) throw Error(ErrorCode::InvalidInput, "grid_size must be >= 101");
  const auto t = op.matrix();
  if (m + 1 > t.size()) throw Error(ErrorCode::InvalidInput, "more eigenvalues requested than grid unknowns");

  const auto raw = lowest_eigenvalues(t, m + 1);

  SpectrumResult out;
  out.m = m;
  out.grid_size = op.grid_size;
  out.domain_radius = op.domain_radius;
  out.bc = op.bc;
  out.grid = op.grid;
  for (std::size_t i = 0; i < m; ++i) {
    out.eigenvalues.push_back(raw[i] + op.flat_shift);
    out.operator_eigenvalues.push_back(-(raw[i] + op.flat_shift));
    auto v = inverse_iteration(t, raw[i]);
    const double scale = 1.0 / std::sqrt(op.h);
    for (double& x : v) x *= scale;
    out.eigenvectors.push_back(std::move(v));
  }

  if (options.richardson) {
    const auto coarse = op.resampled((op.grid_size + 1) / 2);
    const auto craw = lowest_eigenvalues(coarse.matrix(), m);
    const double ratio = coarse.h / op.h;
    for (std::size_t i = 0; i < m; ++i) {
      out.coarse_eigenvalues.push_back(craw[i] + op.flat_shift);
      out.richardson.push_back(std::abs(raw[i] - craw[i]) / (ratio * ratio - 1.0));
    }
    for (std::size_t i = 0; i < m; ++i) {
      double gap = raw[i + 1] - raw[i];
      if (i > 0) gap = std::min(gap, raw[i] - raw[i - 1]);
      if (out.richardson[i] > options.max_error_to_gap * gap) {
        throw Error(ErrorCode::TruncationDominated,
                    "Richardson estimate of eigenvalue " + std::to_string(i) + " exceeds 10% of its gap");
      }
    }
  }
  return out;
}

double rayleigh_quotient(const WeightedOperator1D& op, const std::vector<double>& psi) {
  if (psi.size() != op.size()) throw Error(ErrorCode::InvalidInput, "test function has the wrong length");
  double den = 0.0;
  for (double v : psi) den += v * v;
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroDenominator, "test function vanishes on the grid");
  const auto hpsi = op.matrix().apply(psi);
  double num = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) num += psi[i] * hpsi[i];
  return num / den + op.flat_shift;
}

double weighted_rayleigh_quotient(const WeightedOperator1D& op, const std::vector<double>& u) {
  const std::size_t n = op.size();
  if (u.size() != n) throw Error(ErrorCode::InvalidInput, "test function has the wrong length");
  const double ref = max_finite(op.measure_log);
  auto rho = [ref](double log_density) { return std::exp(log_density - ref); };
  const double inv_h2 = 1.0 / (op.h * op.h);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double left = j > 0 ? u[j - 1] : 0.0;
    const double right = j < n ? u[j] : 0.0;
    const double d = right - left;
    num += rho(op.measure_log_flux[j]) * d * d * inv_h2;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rho(op.measure_log[i]) * u[i] * u[i];
    num -= op.potential[i] * w;
    den += w;
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroDenominator, "test function vanishes on the grid");
  return num / den + op.flat_shift;
}

std::vector<double> untransform(const WeightedOperator1D& op, const std::vector<double>& psi) {
  const double ref = min_finite(op.measure_log);
  std::vector<double> u(psi.size());
  double big = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    u[i] = psi[i] * std::exp(-0.5 * (op.measure_log[i] - ref));
    big = std::max(big, std::abs(u[i]));
  }
  if (big > 0.0) {
    for (double& v : u) v /= big;
  }
  return u;
}

}  // namespace expanderlab
