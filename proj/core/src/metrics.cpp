#include "idp/metrics.hpp"

#include <stdexcept>

namespace idp {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> ConfusionTable::specificity() const {
  return ratio(tn, tn + fp);
}

std::optional<double> ConfusionTable::sensitivity() const {
  return ratio(tp, tp + fn);
}

std::optional<double> ConfusionTable::precision() const {
  return ratio(tp, tp + fp);
}

ConfusionTable& ConfusionTable::operator+=(const ConfusionTable& other) {
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  tp += other.tp;
  return *this;
}

ConfusionTable confusion(std::span<const std::uint8_t> pred,
                         std::span<const std::uint8_t> truth) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("prediction and truth lengths differ");
  }
  ConfusionTable t;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i]) {
      (pred[i] ? t.tp : t.fn) += 1;
    } else {
      (pred[i] ? t.fp : t.tn) += 1;
    }
  }
  return t;
}

}  // namespace idp
