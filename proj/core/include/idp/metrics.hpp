#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace idp {

// Classification counts. The derived ratios return nullopt on an empty
// denominator; callers print that as "n/a", never as 0.
struct ConfusionTable {
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tp = 0;

  std::optional<double> specificity() const;  // tn / (tn + fp)
  std::optional<double> sensitivity() const;  // tp / (tp + fn)
  std::optional<double> precision() const;    // tp / (tp + fp)

  std::int64_t total() const { return tn + fp + fn + tp; }
  ConfusionTable& operator+=(const ConfusionTable& other);
  bool operator==(const ConfusionTable&) const = default;
};

// Entry-wise comparison of a 0/1 prediction against a 0/1 truth vector.
ConfusionTable confusion(std::span<const std::uint8_t> pred,
                         std::span<const std::uint8_t> truth);

}  // namespace idp
