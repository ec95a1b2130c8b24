#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "expanderlab/error.hpp"
#include "expanderlab/generators.hpp"
#include "expanderlab/spectral.hpp"

using namespace expanderlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

ExpanderSurface curve_cylinder(double d0 = 1.0) {
  ShootingConfig c;
  c.d0 = d0;
  return make_curve_cylinder(shoot_expander_curve(c), 2);
}

ExpanderSurface rotational_cap(double d0, int n) {
  ShootingConfig c;
  c.d0 = d0;
  return shoot_rotational_expander(c, n);
}

}  // namespace

TEST(Spectral, HyperplaneSpectraAreHalfIntegers) {
  for (int n = 1; n <= 3; ++n) {
    const auto h = make_hyperplane(n);
    const auto drift = bottom_spectrum(ground_state_transform(h, PotentialKind::DriftOnly), 5);
    const auto stab = bottom_spectrum(ground_state_transform(h, PotentialKind::Stability), 5);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(drift.eigenvalues[j], 0.5 * n + 0.5 * j, 1e-8) << "n = " << n;
      EXPECT_NEAR(stab.eigenvalues[j], 0.5 * n + 0.5 * j + 0.5, 1e-8) << "n = " << n;
      EXPECT_DOUBLE_EQ(drift.operator_eigenvalues[j], -drift.eigenvalues[j]);
    }
  }
}

TEST(Spectral, HyperplaneWeightIsTheGaussian) {
  const auto op = ground_state_transform(make_hyperplane(1), PotentialKind::DriftOnly);
  for (std::size_t i = 0; i < op.size(); i += 37) {
    EXPECT_NEAR(op.weight_log[i], 0.25 * op.grid[i] * op.grid[i], 1e-12);
  }
}

TEST(Spectral, CylinderPotentialClosedForm) {
  // On a profile curve V = |gamma|^2/16 + 1/4 + k^2/4.
  const auto s = curve_cylinder(1.0);
  const auto op = ground_state_transform(s, PotentialKind::DriftOnly);
  const auto& p = *s.profile;
  const double s_base = p.s(p.nearest_to_origin());
  for (std::size_t i = 0; i < op.size(); i += 97) {
    const double u = (s_base + op.grid[i] - p.s0()) / p.ds();
    const auto j = static_cast<std::size_t>(std::llround(u));
    if (std::abs(u - j) > 1e-6) continue;  // only nodes that coincide with samples
    const Vec2 x = p.position(j);
    const double k = p.curvature(j);
    EXPECT_NEAR(op.effective_potential[i], dot(x, x) / 16 + 0.25 + k * k / 4, 1e-6);
    EXPECT_LE(op.effective_potential[i], dot(x, x) / 16 + 0.25 * s.n + 1e-9);
    EXPECT_GE(op.effective_potential[i], 0.25);
  }
}

TEST(Spectral, PotentialMatchesDifferencedMeasure) {
  // V = W'^2/4 + W''/2 - q with the derivatives taken numerically from W.
  for (const auto& s : {curve_cylinder(0.5), rotational_cap(1.0, 2), rotational_cap(0.5, 3)}) {
    for (auto kind : {PotentialKind::DriftOnly, PotentialKind::Stability}) {
      const auto op = ground_state_transform(s, kind, {1001, 8.0});
      const auto& f = *op.fields;
      const double h = 1e-3;
      for (double t : {0.5, 1.3, 2.7, 5.1, 7.5}) {
        const double w1 = (f.measure_log(t + h) - f.measure_log(t - h)) / (2 * h);
        const double w2 = (f.measure_log(t + h) - 2 * f.measure_log(t) + f.measure_log(t - h)) / (h * h);
        const double expected = 0.25 * w1 * w1 + 0.5 * w2 - f.potential(t);
        EXPECT_NEAR(f.effective_potential(t), expected, 1e-3 * std::max(1.0, std::abs(expected))) << "t = " << t;
      }
    }
  }
}

TEST(Spectral, MatrixActsAsTheSchroedingerOperator) {
  // psi = exp(-t^2/8) is the transformed ground state of the line.
  const auto op = ground_state_transform(make_hyperplane(1), PotentialKind::DriftOnly);
  std::vector<double> psi;
  for (double t : op.grid) psi.push_back(std::exp(-t * t / 8));
  const auto hpsi = op.matrix().apply(psi);
  // The end rows see the Dirichlet wall, where psi is small but not zero.
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) EXPECT_NEAR(hpsi[i], 0.5 * psi[i], 1e-5);
}

TEST(Spectral, RayleighQuotientsAgreeOnEigenvectors) {
  const auto op = ground_state_transform(curve_cylinder(1.0), PotentialKind::Stability);
  const auto spec = bottom_spectrum(op, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& psi = spec.eigenvectors[j];
    EXPECT_NEAR(rayleigh_quotient(op, psi), spec.eigenvalues[j], 1e-9);
    EXPECT_NEAR(weighted_rayleigh_quotient(op, untransform(op, psi)), spec.eigenvalues[j], 1e-8);
  }
}

TEST(Spectral, RayleighQuotientBoundsTheBottom) {
  const auto op = ground_state_transform(curve_cylinder(2.0), PotentialKind::DriftOnly);
  const double lambda1 = bottom_spectrum(op, 1).eigenvalues[0];
  for (double width : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> bump;
    for (double t : op.grid) bump.push_back(std::exp(-t * t / (width * width)));
    EXPECT_GE(rayleigh_quotient(op, bump), lambda1 - 1e-12) << "width " << width;
  }
  // Perturbing the ground state raises the quotient quadratically.
  const auto psi = bottom_spectrum(op, 1).eigenvectors[0];
  std::vector<double> bump;
  for (double t : op.grid) bump.push_back(t * std::exp(-t * t / 4));
  auto perturbed = [&](double eps) {
    std::vector<double> v(psi);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += eps * bump[i];
    return rayleigh_quotient(op, v) - lambda1;
  };
  const double d1 = perturbed(1e-2);
  const double d2 = perturbed(5e-3);
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d1 / d2, 4.0, 0.1);
}

TEST(Spectral, SecondOrderGridConvergence) {
  const auto op = ground_state_transform(curve_cylinder(1.0), PotentialKind::Stability, {4001, 12.0});
  const double a = bottom_spectrum(op.resampled(1001), 1, {false}).eigenvalues[0];
  const double b = bottom_spectrum(op.resampled(2001), 1, {false}).eigenvalues[0];
  const double c = bottom_spectrum(op, 1, {false}).eigenvalues[0];
  EXPECT_NEAR((a - b) / (b - c), 4.0, 0.3);
}

TEST(Spectral, TruncationIsNegligibleAtTheDefaultRadius) {
  const auto s = curve_cylinder(1.0);
  const auto near = bottom_spectrum(ground_state_transform(s, PotentialKind::DriftOnly, {2001, 10.0}), 3);
  const auto far = bottom_spectrum(ground_state_transform(s, PotentialKind::DriftOnly, {2801, 14.0}), 3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(near.eigenvalues[j], far.eigenvalues[j], 1e-6);
}

TEST(Spectral, GroundStateIsPositiveAndSimple) {
  for (const auto& s : {curve_cylinder(0.25), rotational_cap(1.0, 2)}) {
    const auto spec = bottom_spectrum(ground_state_transform(s, PotentialKind::DriftOnly), 4);
    for (double v : spec.eigenvectors[0]) EXPECT_GE(v, -1e-12);
    for (std::size_t j = 1; j < spec.eigenvalues.size(); ++j) {
      EXPECT_GT(spec.eigenvalues[j] - spec.eigenvalues[j - 1], 1e-3);
    }
    double norm = 0.0;
    for (double v : spec.eigenvectors[0]) norm += v * v;
    EXPECT_NEAR(norm * ground_state_transform(s, PotentialKind::DriftOnly).h, 1.0, 1e-10);
  }
}

TEST(Spectral, FlatCapMatchesRadialHermite) {
  // Radial eigenfunctions of the drifted Laplacian on R^n have eigenvalues n/2 + j.
  for (int n : {2, 3}) {
    const auto op = ground_state_transform(rotational_cap(0.0, n), PotentialKind::DriftOnly);
    EXPECT_EQ(op.bc, BoundaryCondition::NeumannCap);
    const auto drift = bottom_spectrum(op, 4);
    const auto stab = bottom_spectrum(ground_state_transform(rotational_cap(0.0, n), PotentialKind::Stability), 4);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(drift.eigenvalues[j], 0.5 * n + j, 1e-4) << "n = " << n;
      EXPECT_NEAR(stab.eigenvalues[j], 0.5 * n + j + 0.5, 1e-4) << "n = " << n;
    }
  }
}

TEST(Spectral, ErrorPaths) {
  const auto h = make_hyperplane(1);
  EXPECT_EQ(code_of([&] { bottom_spectrum(ground_state_transform(h, PotentialKind::DriftOnly, {51, 12.0}), 1); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { bottom_spectrum(ground_state_transform(h, PotentialKind::DriftOnly), 0); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { bottom_spectrum(ground_state_transform(h, PotentialKind::DriftOnly, {101, 12.0}), 20); }),
            ErrorCode::TruncationDominated);
  EXPECT_EQ(code_of([&] { ground_state_transform(curve_cylinder(), PotentialKind::DriftOnly, {4001, 30.0}); }),
            ErrorCode::UnderResolved);
  auto unset = curve_cylinder();
  unset.orientation.reset();
  EXPECT_EQ(code_of([&] { ground_state_transform(unset, PotentialKind::DriftOnly); }), ErrorCode::OrientationUnset);
  const auto op = ground_state_transform(h, PotentialKind::DriftOnly, {201, 12.0});
  EXPECT_EQ(code_of([&] { rayleigh_quotient(op, std::vector<double>(op.size(), 0.0)); }), ErrorCode::ZeroDenominator);
  EXPECT_EQ(code_of([&] { rayleigh_quotient(op, {1.0}); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { potential_kind_from_string("heat"); }), ErrorCode::InvalidInput);
}
