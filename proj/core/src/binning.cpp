#include "idp/binning.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "idp/hilbert.hpp"

namespace idp {

std::int64_t BinIndex::sum() const {
  return std::accumulate(entries.begin(), entries.end(), std::int64_t{0});
}

BinIndex bin_of(const RationalWeights& w, int d) {
  if (static_cast<int>(w.numerators.size()) != d + 1) {
    throw std::invalid_argument("weight vector length does not match d+1");
  }
  BinIndex alpha;
  alpha.entries.resize(d + 1);
  for (int i = 0; i <= d; ++i) {
    const std::int64_t num = w.numerators[i];
    if (num < 0 || num >= w.denominator) {
      throw std::invalid_argument(
          "bin_of requires fundamental-parallelepiped weights in [0, 1)");
    }
    const __int128 scaled = static_cast<__int128>(d + 1) * num;
    alpha.entries[i] = static_cast<std::int32_t>(scaled / w.denominator);
  }
  return alpha;
}

std::int64_t height_from_bin(const BinIndex& alpha) {
  const std::int64_t parts = static_cast<std::int64_t>(alpha.entries.size());
  const std::int64_t s = alpha.sum();
  return (s + parts - 1) / parts;
}

std::uint64_t lex_rank(const BinIndex& alpha, int d) {
  if (static_cast<int>(alpha.entries.size()) != d + 1) {
    throw std::invalid_argument("bin index length does not match d+1");
  }
  const std::uint64_t base = static_cast<std::uint64_t>(d) + 1;
  std::uint64_t rank = 0;
  for (std::int32_t digit : alpha.entries) {
    if (digit < 0 || digit > d) {
      throw std::invalid_argument("bin index entry out of [0, d]");
    }
    rank = rank * base + static_cast<std::uint64_t>(digit);
  }
  return rank;
}

BinIndex lex_unrank(std::uint64_t rank, int d) {
  const std::uint64_t base = static_cast<std::uint64_t>(d) + 1;
  std::uint64_t cube = 1;
  for (int i = 0; i <= d; ++i) cube *= base;
  if (rank >= cube) {
    throw std::out_of_range("bin rank out of [0, (d+1)^(d+1))");
  }
  BinIndex alpha;
  alpha.entries.assign(d + 1, 0);
  for (int i = d; i >= 0; --i) {
    alpha.entries[i] = static_cast<std::int32_t>(rank % base);
    rank /= base;
  }
  return alpha;
}

RelevantSet RelevantSet::build(int d) {
  if (d < 1 || d > 6) {
    throw std::invalid_argument("relevant set supported for 1 <= d <= 6");
  }
  RelevantSet set;
  set.d_ = d;
  // Odometer over the cube in lex order; keep indices with sum > d+1.
  BinIndex alpha;
  alpha.entries.assign(d + 1, 0);
  std::int64_t sum = 0;
  while (true) {
    if (sum > d + 1) {
      set.rank_by_cube_rank_.emplace(
          lex_rank(alpha, d), static_cast<std::int32_t>(set.indices_.size()));
      set.indices_.push_back(alpha);
    }
    int pos = d;
    while (pos >= 0 && alpha.entries[pos] == d) {
      sum -= d;
      alpha.entries[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    alpha.entries[pos] += 1;
    sum += 1;
  }
  return set;
}

std::optional<std::int32_t> RelevantSet::rank_of(const BinIndex& alpha) const {
  auto it = rank_by_cube_rank_.find(lex_rank(alpha, d_));
  if (it == rank_by_cube_rank_.end()) return std::nullopt;
  return it->second;
}

HibVector hib(const QVector& q, const RelevantSet& relevant) {
  if (q.dim() != relevant.dim()) {
    throw std::invalid_argument("q-vector dimension does not match relevant set");
  }
  HibVector out;
  out.relevant = &relevant;
  for (const FppPoint& z : hilbert_basis(q).extras) {
    const BinIndex alpha = bin_of(z.weights, q.dim());
    if (auto rank = relevant.rank_of(alpha)) {
      out.positives.push_back(*rank);
    }
  }
  std::sort(out.positives.begin(), out.positives.end());
  out.positives.erase(std::unique(out.positives.begin(), out.positives.end()),
                      out.positives.end());
  return out;
}

int supp_tolerant(std::int64_t positives_count, std::int64_t tau) {
  if (positives_count < 0 || tau < 0) {
    throw std::invalid_argument("counts and tolerance must be non-negative");
  }
  return positives_count <= tau ? 1 : 0;
}

std::string format_ranks(std::span<const std::int32_t> ranks) {
  std::string out;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(ranks[i]);
  }
  return out;
}

std::vector<std::int32_t> parse_ranks(std::string_view text) {
  std::vector<std::int32_t> ranks;
  if (text.empty()) return ranks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 0) {
      throw std::invalid_argument("malformed rank list: '" + std::string(text) +
                                  "'");
    }
    ranks.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return ranks;
}

}  // namespace idp
