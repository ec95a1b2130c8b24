#include <gtest/gtest.h>

#include <cstdlib>

#include "expanderlab/error.hpp"
#include "expanderlab/generators.hpp"
#include "expanderlab/verify.hpp"

using namespace expanderlab;

namespace {

const std::vector<SweepMember>& default_members() {
  static const auto members = [] {
    SweepSpec spec;
    spec.include_negative_controls = true;
    return generate_sweep(spec, 4);
  }();
  return members;
}

const SweepMember& member(const std::string& id) {
  for (const auto& m : default_members()) {
    if (m.id == id) return m;
  }
  throw std::runtime_error("no member " + id);
}

const CheckRecord& record(const VerificationReport& r, const std::string& surface, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.surface == surface && c.name == name) return c;
  }
  throw std::runtime_error("no record " + surface + "/" + name);
}

const VerificationReport& default_report() {
  static const auto report = [] {
    VerifyOptions o;
    o.threads = 4;
    return run_full_suite(default_members(), o);
  }();
  return report;
}

}  // namespace

TEST(Verify, CheckNamesAndAliases) {
  EXPECT_EQ(all_check_names().size(), 7u);
  EXPECT_EQ(resolve_check_name("lambda1"), kCheckLambda1);
  EXPECT_EQ(resolve_check_name("a2_growth"), kCheckA2Growth);
  EXPECT_EQ(resolve_check_name(kCheckSimons), kCheckSimons);
  EXPECT_THROW(resolve_check_name("bogus"), Error);
}

TEST(Verify, HyperplanesSatisfyEveryCheckWithEquality) {
  const auto& r = default_report();
  for (int n = 1; n <= 3; ++n) {
    const std::string id = "hyperplane_" + std::to_string(n);
    const auto& l = record(r, id, kCheckLambda1);
    EXPECT_TRUE(l.pass);
    EXPECT_NEAR(l.measured_value("lambda1"), 0.5 * n, 2e-3);
    const auto& mu = record(r, id, kCheckMu1);
    EXPECT_TRUE(mu.pass);
    EXPECT_NEAR(mu.measured_value("mu1"), 0.5 * n + 0.5, 2e-3);
  }
}

TEST(Verify, DefaultSweepHasNoUnexpectedOutcomes) {
  const auto& r = default_report();
  EXPECT_GE(r.checks.size(), 40u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.ok()) << c.surface << " " << c.name << ": " << c.note;
  EXPECT_TRUE(r.all_ok());
}

TEST(Verify, CircleControlFailsOnlyTheExpanderChecks) {
  std::vector<const CheckRecord*> circle;
  for (const auto& c : default_report().checks) {
    if (c.surface == "control_circle") circle.push_back(&c);
  }
  ASSERT_EQ(circle.size(), 2u);
  for (const auto* c : circle) {
    EXPECT_FALSE(c->pass) << c->name;
    EXPECT_TRUE(c->expected_fail);
    EXPECT_TRUE(c->ok());
  }
  EXPECT_GT(record(default_report(), "control_circle", kCheckCoordinate).measured_value("residual"), 0.1);
}

TEST(Verify, LambdaBoundIsStrictOffTheHyperplane) {
  for (const auto& m : default_members()) {
    if (m.role != MemberRole::Member || m.kind == "hyperplane") continue;
    const auto& l = record(default_report(), m.id, kCheckLambda1);
    if (m.convexity == MeanConvexity::Flat) continue;
    EXPECT_GT(l.measured_value("lambda1_minus_half_n"), l.measured_value("richardson")) << m.id;
  }
}

TEST(Verify, MeanConvexStabilityBottomRecordsBothThresholds) {
  const auto& mu = record(default_report(), "curve_d0_1", kCheckMu1);
  EXPECT_TRUE(mu.pass);
  EXPECT_EQ(mu.measured_value("holds_half"), 1.0);
  EXPECT_NEAR(mu.measured_value("mu1_minus_half") - mu.measured_value("mu1_minus_one"), 0.5, 1e-15);
}

TEST(Verify, CurvesHaveRankOneSecondFundamentalForm) {
  const auto& s = record(default_report(), "curve_d0_0.5", kCheckSimons);
  EXPECT_EQ(s.measured_value("grad_A_minus_grad_abs_A"), 0.0);
  const auto& rot = record(default_report(), "rotational_n2_h1", kCheckSimons);
  EXPECT_GT(rot.measured_value("grad_A_minus_grad_abs_A"), 0.0);
}

TEST(Verify, IdentityResidualsShrinkQuadratically) {
  for (const std::string id : {"curve_d0_1", "rotational_n2_h1"}) {
    const auto& m = member(id);
    const auto fine = identity_residuals(m.surface, *m.surface.profile);
    const auto coarse = identity_residuals(m.surface, m.surface.profile->coarsened());
    EXPECT_NEAR(coarse.coordinate / fine.coordinate, 4.0, 0.5) << id;
    EXPECT_NEAR(coarse.simons_A / fine.simons_A, 4.0, 0.5) << id;
    EXPECT_LE(fine.ground_state, 1e-4) << id;
  }
}

TEST(Verify, WeightedA2GrowthOnNonflatMembers) {
  const auto& c = record(default_report(), "curve_d0_2", kCheckA2Growth);
  EXPECT_TRUE(c.pass);
  EXPECT_GT(c.measured_value("I8_over_I4"), 40.0);
  EXPECT_EQ(c.measured_value("increasing_over_R2"), 1.0);
}

TEST(Verify, ReportIsIndependentOfThreadCount) {
  VerifyOptions one;
  one.threads = 1;
  VerifyOptions four;
  four.threads = 4;
  EXPECT_EQ(report_json(run_full_suite(default_members(), one)), report_json(run_full_suite(default_members(), four)));
}

TEST(Verify, SelectedChecksOnly) {
  VerifyOptions o;
  o.checks = {"lambda1"};
  const auto r = run_full_suite(default_members(), o);
  for (const auto& c : r.checks) EXPECT_EQ(c.name, kCheckLambda1);
  EXPECT_EQ(r.checks.size(), 9u);
}

TEST(Verify, DomainBeyondTheProfileFailsTheSpectralChecks) {
  VerifyOptions o;
  o.grid.domain_radius = 30.0;
  o.checks = {"lambda1", "mu1"};
  const auto r = run_full_suite({member("curve_d0_1")}, o);
  ASSERT_EQ(r.checks.size(), 2u);
  for (const auto& c : r.checks) {
    EXPECT_FALSE(c.pass);
    EXPECT_FALSE(c.note.empty());
  }
  EXPECT_FALSE(r.all_ok());
}

TEST(Verify, TimestampFollowsSourceDateEpoch) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(report_timestamp(), "1970-01-02T00:00:00Z");
  ::setenv("SOURCE_DATE_EPOCH", "soon", 1);
  EXPECT_EQ(report_timestamp(), "unset");
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(report_timestamp(), "unset");
}

TEST(Verify, MarkdownListsEveryRecord) {
  const auto md = report_markdown(default_report());
  EXPECT_NE(md.find("| hyperplane_1 | lambda1_lower_bound | yes |"), std::string::npos);
  EXPECT_NE(md.find(std::to_string(default_report().checks.size()) + " checks, 0 unexpected"), std::string::npos);
}
