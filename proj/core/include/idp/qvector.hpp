#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace idp {

// The integer tuple q = (q_1, ..., q_d) defining a Delta(1,q) lattice
// simplex: conv{e_1, ..., e_d, -sum q_i e_i} in R^d. The normalized volume
// N = 1 + sum q_i is cached; it equals the number of lattice points of the
// fundamental parallelepiped.
class QVector {
 public:
  // Requires d >= 1 and q_i >= 0. Rejects tuples whose volume is large
  // enough that products of the form b * q_j (both < N) could leave the
  // exact 64-bit range used throughout the geometry code.
  explicit QVector(std::vector<std::int64_t> entries);

  // Parses the comma-separated text form, e.g. "4,10,14,14".
  static QVector parse(std::string_view text);

  int dim() const { return static_cast<int>(q_.size()); }
  const std::vector<std::int64_t>& entries() const { return q_; }
  std::int64_t volume() const { return n_; }

  std::string str() const;

  bool operator==(const QVector&) const = default;

 private:
  std::vector<std::int64_t> q_;
  std::int64_t n_ = 1;
};

}  // namespace idp
