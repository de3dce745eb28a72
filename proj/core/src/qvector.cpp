#include "idp/qvector.hpp"

#include <charconv>
#include <stdexcept>

namespace idp {

namespace {

// Keeps N^2 (and a small multiple of it) inside int64_t.
constexpr std::int64_t kMaxVolume = 1'000'000'000;

}  // namespace

QVector::QVector(std::vector<std::int64_t> entries) : q_(std::move(entries)) {
  if (q_.empty()) {
    throw std::invalid_argument("q-vector must have at least one entry");
  }
  n_ = 1;
  for (std::int64_t qi : q_) {
    if (qi < 0) {
      throw std::invalid_argument("q-vector entries must be non-negative");
    }
    n_ += qi;
    if (n_ > kMaxVolume) {
      throw std::invalid_argument(
          "normalized volume exceeds the exact 64-bit arithmetic range");
    }
  }
}

QVector QVector::parse(std::string_view text) {
  std::vector<std::int64_t> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("malformed q-vector: '" + std::string(text) +
                                  "'");
    }
    entries.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return QVector(std::move(entries));
}

std::string QVector::str() const {
  std::string out;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(q_[i]);
  }
  return out;
}

}  // namespace idp
