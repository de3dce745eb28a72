#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "idp/binning.hpp"
#include "idp/dataset.hpp"
#include "idp/qvector.hpp"

using namespace idp;

namespace {

std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int32_t>>>
as_multiset(const std::vector<LabeledExample>& records) {
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int32_t>>> out;
  out.reserve(records.size());
  for (const LabeledExample& r : records) {
    out.emplace_back(r.q.entries(), r.positives);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("generation is deterministic and thread-count independent") {
  const RelevantSet relevant = RelevantSet::build(3);
  const Dataset a = generate_dataset(3, 10, 60, 99, relevant, 1);
  const Dataset b = generate_dataset(3, 10, 60, 99, relevant, 4);
  REQUIRE(a.records.size() == 60);
  REQUIRE(b.records.size() == 60);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].q == b.records[i].q);
    CHECK(a.records[i].positives == b.records[i].positives);
  }

  const Dataset c = generate_dataset(3, 10, 60, 100, relevant, 0);
  bool any_difference = false;
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    any_difference = any_difference || !(c.records[i].q == a.records[i].q);
  }
  CHECK(any_difference);
}

TEST_CASE("generated records are in range and exactly labeled") {
  const RelevantSet relevant = RelevantSet::build(2);
  const Dataset data = generate_dataset(2, 7, 80, 5, relevant);
  for (const LabeledExample& record : data.records) {
    for (std::int64_t e : record.q.entries()) {
      CHECK(e >= 1);
      CHECK(e <= 7);
    }
    CHECK(record.positives == hib(record.q, relevant).positives);
  }
}

TEST_CASE("split sizes, disjointness, and determinism") {
  const RelevantSet relevant = RelevantSet::build(2);
  const Dataset data = generate_dataset(2, 9, 500, 21, relevant);

  const auto [train, val] = split(data.records, 0.10, 3);
  CHECK(train.size() == 450);
  CHECK(val.size() == 50);

  std::vector<LabeledExample> joined = train;
  joined.insert(joined.end(), val.begin(), val.end());
  CHECK(as_multiset(joined) == as_multiset(data.records));

  const auto [train2, val2] = split(data.records, 0.10, 3);
  CHECK(as_multiset(val) == as_multiset(val2));
  for (std::size_t i = 0; i < val.size(); ++i) {
    CHECK(val[i].q == val2[i].q);
  }

  // 11 at 0.10 rounds to one validation record
  const std::vector<LabeledExample> eleven(data.records.begin(),
                                           data.records.begin() + 11);
  const auto [t11, v11] = split(eleven, 0.10, 3);
  CHECK(t11.size() == 10);
  CHECK(v11.size() == 1);

  // the validation side is never empty and never everything
  const auto [t2, v2] = split(eleven, 0.0001, 3);
  CHECK(v2.size() == 1);
  const auto [t3, v3] = split(eleven, 0.9999, 3);
  CHECK(t3.size() == 1);

  CHECK_THROWS(split(eleven, 0.0, 3));
  CHECK_THROWS(split(eleven, 1.0, 3));
}

TEST_CASE("dataset file round trip") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "idp_dataset_test.txt";
  const RelevantSet relevant = RelevantSet::build(3);
  const Dataset data = generate_dataset(3, 8, 120, 77, relevant);
  save_dataset(data, relevant, path);

  const Dataset loaded = load_dataset(path);
  CHECK(loaded.d == 3);
  CHECK(loaded.bound == 8);
  CHECK(loaded.seed == 77);
  REQUIRE(loaded.records.size() == data.records.size());
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    CHECK(loaded.records[i].q == data.records[i].q);
    CHECK(loaded.records[i].positives == data.records[i].positives);
  }
  std::filesystem::remove(path);
}

TEST_CASE("loading rejects corrupted files") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "idp_dataset_bad.txt";
  auto write_file = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };

  write_file("# otherformat 1 d=2 bound=5 seed=0 relevant=10\n1,1|\n");
  CHECK_THROWS(load_dataset(path));

  // relevant size disagrees with the computed set for d=2
  write_file("# idpdata 1 d=2 bound=5 seed=0 relevant=11\n1,1|\n");
  CHECK_THROWS(load_dataset(path));

  // rank outside the d=2 relevant set
  write_file("# idpdata 1 d=2 bound=5 seed=0 relevant=10\n1,1|99\n");
  CHECK_THROWS(load_dataset(path));

  // wrong label on the first record trips the spot check
  write_file("# idpdata 1 d=2 bound=5 seed=0 relevant=10\n1,1|3\n");
  CHECK_THROWS(load_dataset(path));

  // malformed q entry
  write_file("# idpdata 1 d=2 bound=5 seed=0 relevant=10\n1,x|\n");
  CHECK_THROWS(load_dataset(path));

  std::filesystem::remove(path);
}
