#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "idp/qvector.hpp"

namespace idp {

// All lattice points live in Z^{d+1} with the height coordinate stored
// first: a point (h; x_1, ..., x_d) sits at height h over the spatial point
// (x_1, ..., x_d).

// The d+1 ray generators of cone(Delta), each at height 1. Generator i
// (i < d) embeds e_{i+1}; the last embeds -sum q_i e_i.
struct ConeBasis {
  int d = 0;
  std::vector<std::vector<std::int64_t>> generators;
};

// Exact generator weights of a cone point: gamma_i = numerators[i] / N.
// For fundamental-parallelepiped points all numerators lie in [0, N); the
// linear solve in coords_in_cone can also produce weights >= 1.
struct RationalWeights {
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;
};

// A lattice point of the fundamental parallelepiped together with its exact
// weights and its parameterization index b = weights.numerators.back().
struct FppPoint {
  std::vector<std::int64_t> coords;
  RationalWeights weights;
  std::int64_t b = 0;
};

ConeBasis build_generators(const QVector& q);

// |det| of the (d+1)x(d+1) generator matrix, computed by fraction-free
// (Bareiss) elimination. Equals the normalized volume N.
std::int64_t determinant_magnitude(const ConeBasis& basis);

// The N lattice points of the fundamental parallelepiped, in increasing b.
// Point b has weight numerators n_j = b*q_j mod N for j <= d and n_{d+1} = b;
// its coordinates are integral by construction.
std::vector<FppPoint> fpp_points(const QVector& q);

// Solves w = sum gamma_i g_i exactly over the cone generators. Returns the
// weights when all gamma_i >= 0 and nullopt when w lies outside the cone.
// Weights are not reduced mod 1.
std::optional<RationalWeights> coords_in_cone(std::span<const std::int64_t> w,
                                              const QVector& q);

inline std::int64_t height(std::span<const std::int64_t> coords) {
  return coords.front();
}
inline std::int64_t height(const FppPoint& z) { return z.coords.front(); }

// Entry k counts the fundamental-parallelepiped points at height k,
// k = 0..d. Entries sum to N; entry 0 is the origin.
std::vector<std::int64_t> hstar(const QVector& q);

// True iff the vector rises to some peak and falls afterwards.
bool is_unimodal(std::span<const std::int64_t> v);

}  // namespace idp
