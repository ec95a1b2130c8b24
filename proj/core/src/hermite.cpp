#include "expanderlab/hermite.hpp"

#include <cmath>
#include <functional>

#include "expanderlab/error.hpp"

namespace expanderlab {

namespace {

void check_index(int n, std::span<const int> k) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "dimension must be >= 1");
  if (k.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidInput, "multi-index length must equal the dimension");
  }
  for (int v : k) {
    if (v < 0) throw Error(ErrorCode::InvalidInput, "multi-index entries must be >= 0");
  }
}

}  // namespace

double hermite_eigenvalue(int n, std::span<const int> k) {
  check_index(n, k);
  long twice = n;
  for (int v : k) twice += v;
  return 0.5 * static_cast<double>(twice);
}

double hermite_polynomial(int k, double t) {
  if (k < 0) throw Error(ErrorCode::InvalidInput, "Hermite degree must be >= 0");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 2.0 * t;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * t * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_eigenfunction(int n, std::span<const int> k,
                                          const std::vector<std::vector<double>>& points) {
  check_index(n, k);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    if (x.size() != static_cast<std::size_t>(n)) throw Error(ErrorCode::InvalidInput, "point has the wrong dimension");
    double value = 1.0;
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      value *= hermite_polynomial(k[i], 0.5 * x[i]);
      r2 += x[i] * x[i];
    }
    out.push_back(value * std::exp(-0.25 * r2));
  }
  return out;
}

std::vector<std::vector<int>> multi_indices(int n, int max_order) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "dimension must be >= 1");
  if (max_order < 0) throw Error(ErrorCode::InvalidInput, "max order must be >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> k(n, 0);
  std::function<void(int, int)> fill = [&](int pos, int remaining) {
    if (pos == n - 1) {
      k[pos] = remaining;
      out.push_back(k);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[pos] = v;
      fill(pos + 1, remaining - v);
    }
  };
  for (int order = 0; order <= max_order; ++order) fill(0, order);
  return out;
}

}  // namespace expanderlab
