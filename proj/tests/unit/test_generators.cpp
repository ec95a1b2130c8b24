#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "expanderlab/error.hpp"
#include "expanderlab/generators.hpp"

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

double shot_residual(double ds, int order) {
  ShootingConfig c;
  c.ds = ds;
  c.integrator_order = order;
  c.tol_residual = 1.0;
  return max_abs(expander_residual(make_curve_cylinder(shoot_expander_curve(c), 2)));
}

}  // namespace

TEST(Hyperplane, ResidualVanishesIdentically) {
  for (int n = 1; n <= 3; ++n) {
    const auto h = make_hyperplane(n);
    EXPECT_EQ(max_abs(expander_residual(h)), 0.0);
    EXPECT_TRUE(accepted_as_expander(h));
  }
  EXPECT_EQ(code_of([] { make_hyperplane(0); }), ErrorCode::InvalidInput);
}

TEST(ShootCurve, AcceptedByTheResidualOracle) {
  for (double d0 : {0.25, 0.5, 1.0, 2.0}) {
    ShootingConfig c;
    c.d0 = d0;
    const auto s = make_curve_cylinder(shoot_expander_curve(c), 2);
    EXPECT_LE(max_abs(expander_residual(s)), 1e-6) << "d0 = " << d0;
    EXPECT_EQ(classify_mean_convexity(s), MeanConvexity::MeanConvex);
  }
}

TEST(ShootCurve, CurvatureTimesGaussianIsConstant) {
  // k' = -k <gamma, T>/2 integrates to k exp(|gamma|^2/4) = const.
  ShootingConfig c;
  c.d0 = 1.0;
  const auto p = shoot_expander_curve(c);
  const auto q = [&](std::size_t i) {
    const Vec2 x = p.position(i);
    return p.curvature(i) * std::exp(0.25 * dot(x, x));
  };
  const double q0 = q(p.size() / 2);
  for (std::size_t i = 0; i < p.size(); i += 50) EXPECT_NEAR(q(i) / q0, 1.0, 1e-8) << "sample " << i;
}

TEST(ShootCurve, ZeroCurvatureStartGivesALine) {
  ShootingConfig radial;
  radial.theta0 = 0.0;  // tangent along the position: k(0) = 0
  const auto s = make_curve_cylinder(shoot_expander_curve(radial), 2);
  EXPECT_LE(max_abs(expander_residual(s)), 1e-14);
  EXPECT_EQ(classify_mean_convexity(s), MeanConvexity::Flat);

  ShootingConfig origin;
  origin.d0 = 0.0;
  EXPECT_EQ(classify_mean_convexity(make_curve_cylinder(shoot_expander_curve(origin), 2)), MeanConvexity::Flat);
}

TEST(ShootCurve, ClassicalStepConvergesAtFourthOrder) {
  // ds is kept large enough that the drift stays above roundoff.
  const double r1 = shot_residual(0.04, 4);
  const double r2 = shot_residual(0.02, 4);
  const double r3 = shot_residual(0.01, 4);
  EXPECT_NEAR(std::log2(r1 / r2), 4.0, 0.3);
  EXPECT_NEAR(std::log2(r2 / r3), 4.0, 0.3);
}

TEST(ShootCurve, MidpointStepConvergesAtSecondOrder) {
  const double r1 = shot_residual(0.02, 2);
  const double r2 = shot_residual(0.01, 2);
  EXPECT_NEAR(r1 / r2, 4.0, 0.5);
}

TEST(ShootCurve, RescalingBreaksTheExpanderEquation) {
  ShootingConfig c;
  const auto s = make_curve_cylinder(shoot_expander_curve(c), 2);
  for (double scale : {0.5, 1.5, 2.0}) {
    EXPECT_GT(max_abs(expander_residual(make_rescaled_control(s, scale))), 1e-2) << "c = " << scale;
  }
  EXPECT_LE(max_abs(expander_residual(make_rescaled_control(s, 1.0))), 1e-6);
}

TEST(ShootCurve, TightToleranceIsReported) {
  ShootingConfig c;
  c.tol_residual = 1e-16;
  EXPECT_EQ(code_of([&] { shoot_expander_curve(c); }), ErrorCode::ResidualExceeded);
}

TEST(ShootCurve, InvalidConfigurations) {
  ShootingConfig c;
  c.ds = 0.0;
  EXPECT_EQ(code_of([&] { shoot_expander_curve(c); }), ErrorCode::InvalidInput);
  c = {};
  c.integrator_order = 3;
  EXPECT_EQ(code_of([&] { shoot_expander_curve(c); }), ErrorCode::InvalidInput);
  c = {};
  c.d0 = -1.0;
  EXPECT_EQ(code_of([&] { shoot_expander_curve(c); }), ErrorCode::InvalidInput);
}

TEST(ShootRotational, CapIsAMeanConvexExpander) {
  ShootingConfig c;
  c.d0 = 1.0;
  const auto s = shoot_rotational_expander(c, 2);
  EXPECT_LE(max_abs(expander_residual(s)), 1e-6);
  EXPECT_EQ(classify_mean_convexity(s), MeanConvexity::MeanConvex);
  const auto cd = curvature_of(s);
  for (double h : cd.H) EXPECT_GT(h, 0.0);
  // Umbilic pole with k = d0 / (2n) in each direction.
  EXPECT_NEAR(cd.kappa_profile[0], 0.25, 1e-15);
  EXPECT_NEAR(cd.kappa_parallel[0], 0.25, 1e-15);
}

TEST(ShootRotational, FlatCapReproducesTheHyperplane) {
  ShootingConfig c;
  c.d0 = 0.0;
  const auto s = shoot_rotational_expander(c, 3);
  EXPECT_EQ(max_abs(expander_residual(s)), 0.0);
  EXPECT_EQ(classify_mean_convexity(s), MeanConvexity::Flat);
}

TEST(ShootRotational, CapNeedsPerpendicularStart) {
  ShootingConfig c;
  c.theta0 = 1.0;
  EXPECT_EQ(code_of([&] { shoot_rotational_expander(c, 2); }), ErrorCode::AxisSingularity);
}

TEST(ShootRotational, OffAxisProfileRunningIntoTheAxis) {
  ShootingConfig c;
  c.d0 = 0.5;
  c.theta0 = -std::numbers::pi / 2;  // pointing at the axis
  EXPECT_EQ(code_of([&] { shoot_rotational_expander(c, 2, RotationalStart::OffAxis); }),
            ErrorCode::AxisSingularity);
}

TEST(ShootRotational, OffAxisStartIsAccepted) {
  ShootingConfig c;
  c.d0 = 1.0;
  c.theta0 = 0.3;
  const auto s = shoot_rotational_expander(c, 2, RotationalStart::OffAxis);
  EXPECT_LE(max_abs(expander_residual(s)), 1e-6);
}

TEST(Sweep, DefaultMembersAndIds) {
  const auto members = generate_sweep({}, 1);
  ASSERT_EQ(members.size(), 9u);
  EXPECT_EQ(members[0].id, "curve_d0_0.25");
  EXPECT_EQ(members[4].id, "rotational_n2_h0.5");
  EXPECT_EQ(members[8].id, "hyperplane_3");
  for (const auto& m : members) {
    EXPECT_LE(m.residual_max, default_residual_tolerance(m.surface.kind)) << m.id;
    EXPECT_NE(m.convexity, MeanConvexity::NotMeanConvex) << m.id;
  }
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const auto a = generate_sweep({}, 1);
  const auto b = generate_sweep({}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].residual_max, b[i].residual_max);
    if (a[i].surface.profile) {
      const auto ka = a[i].surface.profile->curvature();
      const auto kb = b[i].surface.profile->curvature();
      EXPECT_TRUE(std::equal(ka.begin(), ka.end(), kb.begin(), kb.end()));
    }
  }
}

TEST(Sweep, NegativeControlsFailTheResidual) {
  const auto controls = negative_controls(1e-3);
  ASSERT_EQ(controls.size(), 2u);
  EXPECT_EQ(controls[0].id, "control_circle");
  EXPECT_NEAR(controls[0].residual_max, 1.5, 1e-9);
  EXPECT_GT(controls[1].residual_max, 1e-2);
  for (const auto& c : controls) EXPECT_EQ(c.role, MemberRole::NegativeControl);
}

TEST(Sweep, MemberIds) {
  ShootingConfig c;
  EXPECT_EQ(member_id("hyperplane", 2, c), "hyperplane_2");
  c.theta0 = 1.5707963;
  EXPECT_EQ(member_id("curve", 2, c), "curve_d0_1");
  c.theta0 = 1.0;
  EXPECT_EQ(member_id("curve", 2, c), "curve_d0_1_theta1");
  EXPECT_THROW(member_id("torus", 2, c), Error);
}
