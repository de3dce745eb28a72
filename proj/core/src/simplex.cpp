#include "idp/simplex.hpp"

#include <cstdlib>
#include <stdexcept>

namespace idp {

namespace {

std::int64_t narrow_checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::runtime_error("exact arithmetic overflow in cone solve");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

ConeBasis build_generators(const QVector& q) {
  const int d = q.dim();
  ConeBasis basis;
  basis.d = d;
  basis.generators.assign(d + 1, std::vector<std::int64_t>(d + 1, 0));
  for (int i = 0; i < d; ++i) {
    basis.generators[i][0] = 1;
    basis.generators[i][i + 1] = 1;
  }
  basis.generators[d][0] = 1;
  for (int j = 0; j < d; ++j) {
    basis.generators[d][j + 1] = -q.entries()[j];
  }
  return basis;
}

std::int64_t determinant_magnitude(const ConeBasis& basis) {
  const int n = basis.d + 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m[r][c] = basis.generators[r][c];
  }
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int pivot = -1;
      for (int r = k + 1; r < n; ++r) {
        if (m[r][k] != 0) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) return 0;
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (int r = k + 1; r < n; ++r) {
      for (int c = k + 1; c < n; ++c) {
        // Bareiss: the division is exact.
        m[r][c] = (m[r][c] * m[k][k] - m[r][k] * m[k][c]) / prev;
      }
      m[r][k] = 0;
    }
    prev = m[k][k];
  }
  __int128 det = sign * m[n - 1][n - 1];
  return narrow_checked(det < 0 ? -det : det);
}

std::vector<FppPoint> fpp_points(const QVector& q) {
  const int d = q.dim();
  const std::int64_t n = q.volume();
  std::vector<FppPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (std::int64_t b = 0; b < n; ++b) {
    FppPoint p;
    p.b = b;
    p.weights.denominator = n;
    p.weights.numerators.resize(d + 1);
    p.coords.assign(d + 1, 0);
    std::int64_t num_sum = 0;
    for (int j = 0; j < d; ++j) {
      const std::int64_t prod = b * q.entries()[j];  // < N^2, in range
      p.weights.numerators[j] = prod % n;
      p.coords[j + 1] = -(prod / n);
      num_sum += p.weights.numerators[j];
    }
    p.weights.numerators[d] = b;
    num_sum += b;
    // num_sum = b*N - N*sum(prod/n) is divisible by N.
    p.coords[0] = num_sum / n;
    points.push_back(std::move(p));
  }
  return points;
}

std::optional<RationalWeights> coords_in_cone(std::span<const std::int64_t> w,
                                              const QVector& q) {
  const int d = q.dim();
  if (static_cast<int>(w.size()) != d + 1) {
    throw std::invalid_argument("point dimension does not match q-vector");
  }
  const std::int64_t n = q.volume();
  __int128 spatial_sum = 0;
  for (int j = 0; j < d; ++j) spatial_sum += w[j + 1];
  // gamma_{d+1} = (h - sum x_j) / N, gamma_j = x_j + q_j * gamma_{d+1}.
  const __int128 last = w[0] - spatial_sum;
  if (last < 0) return std::nullopt;
  RationalWeights weights;
  weights.denominator = n;
  weights.numerators.resize(d + 1);
  for (int j = 0; j < d; ++j) {
    const __int128 num =
        static_cast<__int128>(n) * w[j + 1] + static_cast<__int128>(q.entries()[j]) * last;
    if (num < 0) return std::nullopt;
    weights.numerators[j] = narrow_checked(num);
  }
  weights.numerators[d] = narrow_checked(last);
  return weights;
}

std::vector<std::int64_t> hstar(const QVector& q) {
  std::vector<std::int64_t> counts(q.dim() + 1, 0);
  for (const FppPoint& p : fpp_points(q)) {
    counts.at(static_cast<std::size_t>(height(p))) += 1;
  }
  return counts;
}

bool is_unimodal(std::span<const std::int64_t> v) {
  std::size_t i = 0;
  while (i + 1 < v.size() && v[i] <= v[i + 1]) ++i;
  while (i + 1 < v.size() && v[i] >= v[i + 1]) ++i;
  return i + 1 >= v.size();
}

}  // namespace idp
