#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idp/qvector.hpp"
#include "idp/simplex.hpp"

namespace idp {

// Bin multi-index alpha in {0,...,d}^{d+1}. A fundamental-parallelepiped
// point with weights gamma lands in the bin with entries floor((d+1)*gamma_i).
struct BinIndex {
  std::vector<std::int32_t> entries;

  std::int64_t sum() const;
  bool operator==(const BinIndex&) const = default;
};

BinIndex bin_of(const RationalWeights& w, int d);

// ceil(sum(alpha) / (d+1)); equals the height of every integer point in the
// bin.
std::int64_t height_from_bin(const BinIndex& alpha);

// Rank of alpha in the lexicographic order of the full cube {0,...,d}^{d+1},
// first entry most significant.
std::uint64_t lex_rank(const BinIndex& alpha, int d);
BinIndex lex_unrank(std::uint64_t rank, int d);

// The bin indices with sum(alpha) > d+1, in lexicographic order. These are
// the only bins that can witness a failure of the integer decomposition
// property, and the only coordinates the sieve model scores.
class RelevantSet {
 public:
  static RelevantSet build(int d);

  int dim() const { return d_; }
  std::size_t size() const { return indices_.size(); }
  const BinIndex& at(std::size_t rank) const { return indices_[rank]; }
  std::optional<std::int32_t> rank_of(const BinIndex& alpha) const;

 private:
  int d_ = 0;
  std::vector<BinIndex> indices_;
  std::unordered_map<std::uint64_t, std::int32_t> rank_by_cube_rank_;
};

// 0/1 labeling of the relevant bins by Hilbert-basis membership, stored as
// the ascending ranks of the positive bins.
struct HibVector {
  const RelevantSet* relevant = nullptr;
  std::vector<std::int32_t> positives;
};

// Ranks (within the relevant set) of the bins containing at least one
// Hilbert-basis element beyond the generators. Empty exactly when the
// simplex is IDP.
HibVector hib(const QVector& q, const RelevantSet& relevant);

// 1 iff positives_count <= tau. tau = 0 recovers the strict support test on
// the relevant set.
int supp_tolerant(std::int64_t positives_count, std::int64_t tau);

// Sparse label text form: ascending ranks joined by commas, empty string for
// the empty set.
std::string format_ranks(std::span<const std::int32_t> ranks);
std::vector<std::int32_t> parse_ranks(std::string_view text);

}  // namespace idp
