// Brute-force reference for the fundamental parallelepiped, independent of
// the closed-form enumeration: scan every integer point of the bounding box
// of the closed parallelepiped and keep those whose exact generator weights
// lie in [0, 1). Weights come from Cramer's rule with fraction-free
// determinants, and every accepted solve is re-verified by substitution.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "idp/qvector.hpp"
#include "idp/simplex.hpp"

namespace idp::testing {

inline std::int64_t det_bareiss(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  __int128 sign = 1;
  __int128 prev = 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && a[pivot][k] == 0) ++pivot;
      if (pivot == n) return 0;
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return static_cast<std::int64_t>(sign * a[n - 1][n - 1]);
}

// Sorted coordinate list of the integer points of the half-open fundamental
// parallelepiped of q.
inline std::vector<std::vector<std::int64_t>> oracle_fpp(const QVector& q) {
  const ConeBasis basis = build_generators(q);
  const std::size_t n = static_cast<std::size_t>(basis.d) + 1;

  // columns of the generator matrix
  std::vector<std::vector<std::int64_t>> mat(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mat[i][j] = basis.generators[j][i];
  }
  const std::int64_t det = det_bareiss(mat);
  if (det == 0) throw std::logic_error("degenerate generator matrix");

  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (std::size_t subset = 0; subset < (1u << n); ++subset) {
    std::vector<std::int64_t> v(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (subset & (1u << j)) {
        for (std::size_t i = 0; i < n; ++i) v[i] += basis.generators[j][i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }

  std::vector<std::vector<std::int64_t>> found;
  std::vector<std::int64_t> z = lo;
  while (true) {
    // Cramer numerators: weight_j = det_j / det
    bool inside = true;
    std::vector<std::int64_t> numerators(n);
    for (std::size_t j = 0; j < n && inside; ++j) {
      std::vector<std::vector<std::int64_t>> mj = mat;
      for (std::size_t i = 0; i < n; ++i) mj[i][j] = z[i];
      const std::int64_t dj = det_bareiss(mj);
      numerators[j] = dj;
      // 0 <= dj/det < 1 with either sign of det
      if (det > 0 ? (dj < 0 || dj >= det) : (dj > 0 || dj <= det)) {
        inside = false;
      }
    }
    if (inside) {
      // substitution check: det * z == sum_j numerators[j] * g_j
      for (std::size_t i = 0; i < n; ++i) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += static_cast<__int128>(numerators[j]) * basis.generators[j][i];
        }
        if (acc != static_cast<__int128>(det) * z[i]) {
          throw std::logic_error("oracle solve failed substitution");
        }
      }
      found.push_back(z);
    }
    std::size_t k = n;
    for (;;) {
      if (k == 0) {
        std::sort(found.begin(), found.end());
        return found;
      }
      --k;
      if (++z[k] <= hi[k]) break;
      z[k] = lo[k];
    }
  }
}

}  // namespace idp::testing
