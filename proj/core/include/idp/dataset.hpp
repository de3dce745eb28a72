#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "idp/binning.hpp"
#include "idp/qvector.hpp"

namespace idp {

// A q-vector together with its exact sparse labels: the ascending relevant
// ranks of the bins holding a Hilbert-basis extra.
struct LabeledExample {
  QVector q;
  std::vector<std::int32_t> positives;
};

struct Dataset {
  int d = 0;
  std::int64_t bound = 0;
  std::uint64_t seed = 0;
  std::vector<LabeledExample> records;
};

// count q-vectors drawn i.i.d. uniform on {1,...,bound}^d (duplicates
// allowed), labeled by the exact core. Record r draws its entries from the
// substream keyed by r, so the output is independent of the worker count and
// fully determined by the seed. threads = 0 picks a machine default.
Dataset generate_dataset(int d, std::int64_t bound, std::int64_t count,
                         std::uint64_t seed, const RelevantSet& relevant,
                         int threads = 0);

// Seeded Fisher-Yates shuffle; the tail becomes the validation split. The
// validation size is fraction*n rounded to nearest, clamped to [1, n-1].
std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>> split(
    const std::vector<LabeledExample>& records, double fraction,
    std::uint64_t seed);

// Text format, one record per line: "q1,...,qd|r1,r2,..." under the header
//   # idpdata 1 d=<d> bound=<b> seed=<s> relevant=<size>
void save_dataset(const Dataset& dataset, const RelevantSet& relevant,
                  const std::filesystem::path& path);

// Loads and validates. Rejects a header whose relevant size disagrees with
// the computed set, and re-derives the labels of every 100th record against
// the exact core.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace idp
