#include "expanderlab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expanderlab/error.hpp"

namespace expanderlab {

namespace {

constexpr int kMaxBisections = 200;

double matrix_scale(const SymmetricTridiagonal& t) {
  double s = 0.0;
  for (double a : t.diagonal) s = std::max(s, std::abs(a));
  for (double b : t.off_diagonal) s = std::max(s, std::abs(b));
  return std::max(s, std::numeric_limits<double>::min());
}

}  // namespace

std::vector<double> SymmetricTridiagonal::apply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diagonal[i] * x[i];
    if (i > 0) v += off_diagonal[i - 1] * x[i - 1];
    if (i + 1 < n) v += off_diagonal[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::size_t sturm_count(const SymmetricTridiagonal& t, double x) {
  const std::size_t n = t.size();
  const double pivmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() *
                        std::max(1.0, matrix_scale(t));
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i > 0 ? t.off_diagonal[i - 1] * t.off_diagonal[i - 1] : 0.0;
    d = (t.diagonal[i] - x) - (i > 0 ? b2 / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(const SymmetricTridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off_diagonal[i - 1]);
    if (i + 1 < n) r += std::abs(t.off_diagonal[i]);
    lo = std::min(lo, t.diagonal[i] - r);
    hi = std::max(hi, t.diagonal[i] + r);
  }
  return {lo, hi};
}

std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t m) {
  const std::size_t n = t.size();
  if (n == 0) throw Error(ErrorCode::InvalidInput, "empty matrix");
  m = std::min(m, n);
  const auto [glo, ghi] = gershgorin_bounds(t);
  const double scale = matrix_scale(t);
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> out;
  out.reserve(m);
  double lo_hint = glo - eps * scale;
  for (std::size_t k = 0; k < m; ++k) {
    // Invariant: count(lo) <= k < count(hi).
    double lo = lo_hint;
    double hi = ghi + eps * scale;
    int iter = 0;
    while (hi - lo > 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * eps * eps * scale) {
      if (++iter > kMaxBisections) {
        throw Error(ErrorCode::NotConverged, "bisection failed to isolate eigenvalue " + std::to_string(k));
      }
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (sturm_count(t, mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double value = 0.5 * (lo + hi);
    out.push_back(value);
    lo_hint = lo;
  }
  return out;
}

std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double eigenvalue) {
  const std::size_t n = t.size();
  if (n == 1) return {1.0};
  const double scale = matrix_scale(t);
  const double eps = std::numeric_limits<double>::epsilon();
  // Nudge the shift off the eigenvalue so that the factorization stays
  // nonsingular; the solve then amplifies the wanted direction by ~1/eps.
  const double shift = eigenvalue + 8.0 * eps * scale;

  // LU with partial pivoting of T - shift*I. Row i of U has entries
  // u0[i] (diagonal), u1[i], u2[i] (two superdiagonals after pivoting).
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), l(n, 0.0);
  std::vector<char> swapped(n, 0);
  {
    double d = t.diagonal[0] - shift;
    double e = t.off_diagonal[0];
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double below = t.off_diagonal[i];
      const double next_d = t.diagonal[i + 1] - shift;
      const double next_e = i + 2 < n ? t.off_diagonal[i + 1] : 0.0;
      if (std::abs(d) >= std::abs(below)) {
        const double ratio = d != 0.0 ? below / d : 0.0;
        u0[i] = d;
        u1[i] = e;
        u2[i] = f;
        l[i] = ratio;
        d = next_d - ratio * e;
        e = next_e;
        f = 0.0;
      } else {
        const double ratio = d / below;
        swapped[i] = 1;
        u0[i] = below;
        u1[i] = next_d;
        u2[i] = next_e;
        l[i] = ratio;
        d = e - ratio * next_d;
        e = -ratio * next_e;
        f = 0.0;
      }
    }
    u0[n - 1] = d;
  }
  for (auto& v : u0) {
    if (std::abs(v) < eps * scale) v = (v < 0.0 ? -1.0 : 1.0) * eps * scale;
  }

  auto solve = [&](std::vector<double> b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= l[i] * b[i];
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
      double v = b[ii];
      if (ii + 1 < n) v -= u1[ii] * x[ii + 1];
      if (ii + 2 < n) v -= u2[ii] * x[ii + 2];
      x[ii] = v / u0[ii];
    }
    return x;
  };

  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  };

  // Deterministic, generic starting vector.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  normalize(x);
  for (int it = 0; it < 3; ++it) {
    x = solve(x);
    normalize(x);
  }
  const auto big = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*big < 0.0) {
    for (double& v : x) v = -v;
  }
  return x;
}

}  // namespace expanderlab
