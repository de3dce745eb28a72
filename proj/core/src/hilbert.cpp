#include "idp/hilbert.hpp"

#include <algorithm>

#include "idp/binning.hpp"

namespace idp {

namespace {

bool in_cone(std::span<const std::int64_t> w, const QVector& q) {
  return coords_in_cone(w, q).has_value();
}

bool is_origin(const FppPoint& p) { return p.b == 0; }

}  // namespace

std::vector<FppPoint> reduce_candidates(const QVector& q,
                                        const std::vector<FppPoint>& candidates) {
  const int d = q.dim();
  const ConeBasis basis = build_generators(q);
  std::vector<std::int64_t> diff(d + 1);

  auto reduces = [&](const FppPoint& z, std::span<const std::int64_t> c) {
    for (int i = 0; i <= d; ++i) diff[i] = z.coords[i] - c[i];
    return in_cone(diff, q);
  };

  std::vector<FppPoint> extras;
  for (const FppPoint& z : candidates) {
    if (is_origin(z)) continue;
    bool minimal = true;
    for (const auto& g : basis.generators) {
      if (reduces(z, g)) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      for (const FppPoint& c : candidates) {
        if (is_origin(c) || c.b == z.b) continue;
        if (reduces(z, c.coords)) {
          minimal = false;
          break;
        }
      }
    }
    if (minimal) extras.push_back(z);
  }
  std::sort(extras.begin(), extras.end(), [](const FppPoint& a, const FppPoint& b) {
    const std::int64_t ha = height(a), hb = height(b);
    return ha != hb ? ha < hb : a.b < b.b;
  });
  return extras;
}

HilbertBasis hilbert_basis(const QVector& q) {
  HilbertBasis basis;
  basis.generators = build_generators(q);
  basis.extras = reduce_candidates(q, fpp_points(q));
  return basis;
}

bool is_idp(const QVector& q) {
  for (const FppPoint& z : hilbert_basis(q).extras) {
    if (height(z) != 1) return false;
  }
  return true;  // generators are at height 1 by construction
}

bool is_idp_bins(const QVector& q) {
  const int d = q.dim();
  for (const FppPoint& z : hilbert_basis(q).extras) {
    if (bin_of(z.weights, d).sum() > d + 1) return false;
  }
  return true;
}

}  // namespace idp
