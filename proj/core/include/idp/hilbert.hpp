#pragma once

#include <vector>

#include "idp/qvector.hpp"
#include "idp/simplex.hpp"

namespace idp {

// The Hilbert basis of cone(Delta) intersected with the lattice: the d+1 ray
// generators plus the additively minimal non-zero points of the fundamental
// parallelepiped, sorted by (height, b).
struct HilbertBasis {
  ConeBasis generators;
  std::vector<FppPoint> extras;
};

// Reduction over an explicit candidate set. A non-zero candidate z survives
// iff z - c lies outside the lattice cone for every generator c and every
// other non-zero candidate c. Every monoid element splits as an integral
// generator combination plus one fundamental-parallelepiped point, so with
// the full point set as candidates this test is exact minimality.
std::vector<FppPoint> reduce_candidates(const QVector& q,
                                        const std::vector<FppPoint>& candidates);

HilbertBasis hilbert_basis(const QVector& q);

// Integer decomposition property: every Hilbert basis element has height 1.
bool is_idp(const QVector& q);

// Equivalent criterion through bins: every basis extra lands in a bin whose
// multi-index sums to at most d+1.
bool is_idp_bins(const QVector& q);

}  // namespace idp
