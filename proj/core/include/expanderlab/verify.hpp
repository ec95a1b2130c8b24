#pragma once

#include <string>
#include <vector>

#include "expanderlab/generators.hpp"
#include "expanderlab/spectral.hpp"

namespace expanderlab {

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct CheckRecord {
  std::string name;
  std::string surface;
  std::vector<NamedValue> measured;
  std::vector<NamedValue> bound;
  double margin = 0.0;
  bool pass = false;
  double tolerance = 0.0;
  /// Negative controls are designed to fail their checks.
  bool expected_fail = false;
  std::string note;

  /// The outcome matches the design: a pass, or a designed failure.
  bool ok() const { return pass != expected_fail; }
  double measured_value(const std::string& key) const;
};

inline constexpr const char* kCheckResidual = "expander_residual";
inline constexpr const char* kCheckLambda1 = "lambda1_lower_bound";
inline constexpr const char* kCheckMu1 = "mu1_inequality";
inline constexpr const char* kCheckSimons = "simons_identities";
inline constexpr const char* kCheckCoordinate = "coordinate_eigenfunctions";
inline constexpr const char* kCheckGroundState = "ground_state_equation";
inline constexpr const char* kCheckA2Growth = "a2_weighted_growth";

/// Check names in report order.
const std::vector<std::string>& all_check_names();

/// Accepts a full check name or a short alias (residual, lambda1, mu1,
/// simons, coordinate, ground_state, a2_growth). Throws InvalidInput.
std::string resolve_check_name(const std::string& name);

struct VerifyOptions {
  GridOptions grid;
  /// Equality checks use max(floor, factor * Richardson estimate).
  double equality_floor = 2e-3;
  double richardson_factor = 2.0;
  /// Finite-difference identities pass when the residual is <= C ds^2.
  double fd_constant = 100.0;
  /// Empty means every check.
  std::vector<std::string> checks;
  int threads = 1;
};

/// The two bottoms needed by the spectral checks, on one grid and radius.
struct SurfaceSpectra {
  SpectrumResult drift;
  SpectrumResult stability;
};

SurfaceSpectra compute_spectra(const ExpanderSurface& surface, const GridOptions& grid);

CheckRecord check_expander_residual(const SweepMember& member);
CheckRecord check_lambda1_lower_bound(const SweepMember& member, const SurfaceSpectra& spectra,
                                      const VerifyOptions& options = {});
CheckRecord check_mu1_inequality(const SweepMember& member, const SurfaceSpectra& spectra,
                                 const VerifyOptions& options = {});
CheckRecord check_simons_identities(const SweepMember& member, const VerifyOptions& options = {});
CheckRecord check_coordinate_eigenfunctions(const SweepMember& member, const VerifyOptions& options = {});
CheckRecord check_ground_state_equation(const SweepMember& member, const VerifyOptions& options = {});
CheckRecord check_a2_weighted_growth(const SweepMember& member);

/// Residuals of the finite-difference identities on one profile sampling,
/// maxima over interior samples.
struct IdentityResiduals {
  double simons_H = 0.0;
  double simons_A = 0.0;
  double coordinate = 0.0;
  double ground_state = 0.0;
  /// max |(|grad A|^2 - |grad |A||^2)|; zero when A has rank one.
  double grad_A_gap = 0.0;
};

IdentityResiduals identity_residuals(const ExpanderSurface& surface, const ProfileCurve& profile);

struct VerificationReport {
  std::vector<CheckRecord> checks;
  std::size_t grid_size = 0;
  double domain_radius = 0.0;
  std::string timestamp;

  std::size_t unexpected() const;
  bool all_ok() const { return unexpected() == 0; }
};

/// Runs the selected checks on every member. Errors become failed records;
/// the suite never stops early. Records are ordered by surface id, then
/// check name, independently of the thread count.
VerificationReport run_full_suite(const std::vector<SweepMember>& members, const VerifyOptions& options = {});

/// SOURCE_DATE_EPOCH when set (seconds, rendered UTC), otherwise "unset".
std::string report_timestamp();

std::string report_json(const VerificationReport& report);
std::string report_markdown(const VerificationReport& report);

}  // namespace expanderlab
