#include "idp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "idp/rng.hpp"

namespace idp {

namespace {

int resolve_threads(int threads, std::int64_t work_items) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  return static_cast<int>(
      std::min<std::int64_t>(threads, std::max<std::int64_t>(1, work_items)));
}

}  // namespace

Dataset generate_dataset(int d, std::int64_t bound, std::int64_t count,
                         std::uint64_t seed, const RelevantSet& relevant,
                         int threads) {
  if (d != relevant.dim()) {
    throw std::invalid_argument("dimension does not match relevant set");
  }
  if (bound < 1 || count < 1) {
    throw std::invalid_argument("bound and count must be >= 1");
  }
  Dataset dataset;
  dataset.d = d;
  dataset.bound = bound;
  dataset.seed = seed;
  dataset.records.resize(static_cast<std::size_t>(count),
                         LabeledExample{QVector({0}), {}});

  const CounterRng root(seed);
  auto make_record = [&](std::int64_t r) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(r));
    std::vector<std::int64_t> entries(d);
    for (int i = 0; i < d; ++i) {
      entries[i] = 1 + static_cast<std::int64_t>(rng.next() %
                                                 static_cast<std::uint64_t>(bound));
    }
    QVector q(std::move(entries));
    HibVector labels = hib(q, relevant);
    dataset.records[static_cast<std::size_t>(r)] =
        LabeledExample{std::move(q), std::move(labels.positives)};
  };

  const int workers = resolve_threads(threads, count);
  if (workers == 1) {
    for (std::int64_t r = 0; r < count; ++r) make_record(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t r = w; r < count; r += workers) make_record(r);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return dataset;
}

std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>> split(
    const std::vector<LabeledExample>& records, double fraction,
    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must lie in (0, 1)");
  }
  const std::size_t n = records.size();
  if (n < 2) {
    throw std::invalid_argument("need at least two records to split");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  CounterRng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::size_t val = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  val = std::clamp<std::size_t>(val, 1, n - 1);
  std::vector<LabeledExample> train, validation;
  train.reserve(n - val);
  validation.reserve(val);
  for (std::size_t i = 0; i < n - val; ++i) train.push_back(records[order[i]]);
  for (std::size_t i = n - val; i < n; ++i) validation.push_back(records[order[i]]);
  return {std::move(train), std::move(validation)};
}

void save_dataset(const Dataset& dataset, const RelevantSet& relevant,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# idpdata 1 d=" << dataset.d << " bound=" << dataset.bound
      << " seed=" << dataset.seed << " relevant=" << relevant.size() << '\n';
  for (const LabeledExample& record : dataset.records) {
    out << record.q.str() << '|' << format_ranks(record.positives) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset file: empty");
  }
  Dataset dataset;
  std::size_t relevant_size = 0;
  {
    std::istringstream header(line);
    std::string hash, magic;
    int version = 0;
    header >> hash >> magic >> version;
    if (hash != "#" || magic != "idpdata" || version != 1) {
      throw std::runtime_error("dataset file: unsupported header");
    }
    std::string field;
    while (header >> field) {
      const std::size_t eq = field.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("dataset file: bad header field '" + field + "'");
      }
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "d") dataset.d = std::stoi(value);
      else if (key == "bound") dataset.bound = std::stoll(value);
      else if (key == "seed") dataset.seed = std::stoull(value);
      else if (key == "relevant") relevant_size = std::stoull(value);
      else throw std::runtime_error("dataset file: unknown header key '" + key + "'");
    }
  }
  if (dataset.d < 1 || dataset.bound < 1) {
    throw std::runtime_error("dataset file: incomplete header");
  }
  const RelevantSet relevant = RelevantSet::build(dataset.d);
  if (relevant.size() != relevant_size) {
    throw std::runtime_error("dataset file: relevant-set size mismatch");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t bar = line.find('|');
    if (bar == std::string::npos) {
      throw std::runtime_error("dataset file: record without '|'");
    }
    LabeledExample record{QVector::parse(std::string_view(line).substr(0, bar)),
                          parse_ranks(std::string_view(line).substr(bar + 1))};
    if (record.q.dim() != dataset.d) {
      throw std::runtime_error("dataset file: record dimension mismatch");
    }
    for (std::int32_t rank : record.positives) {
      if (static_cast<std::size_t>(rank) >= relevant.size()) {
        throw std::runtime_error("dataset file: label rank out of range");
      }
    }
    dataset.records.push_back(std::move(record));
  }
  // Spot-check label fidelity on 1% of the records.
  for (std::size_t r = 0; r < dataset.records.size(); r += 100) {
    const LabeledExample& record = dataset.records[r];
    if (hib(record.q, relevant).positives != record.positives) {
      throw std::runtime_error("dataset file: labels disagree with exact core at record " +
                               std::to_string(r));
    }
  }
  return dataset;
}

}  // namespace idp
