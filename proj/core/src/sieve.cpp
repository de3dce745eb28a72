#include "idp/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "idp/trainer.hpp"

namespace idp {

namespace {

void check_widths(const Params& params, int d) {
  if (params.widths.empty() || params.widths.front() != d) {
    throw std::invalid_argument("model input width does not match d");
  }
}

std::int64_t count_positive(const std::vector<double>& logits, double eta) {
  std::int64_t count = 0;
  for (double t : logits) {
    if (sigmoid(t) > eta) ++count;
  }
  return count;
}

}  // namespace

std::vector<double> hib_logits(const Params& params, const QVector& q,
                               std::int64_t bound) {
  check_widths(params, q.dim());
  std::vector<double> x;
  scale_input(q, bound, x);
  return forward(params, x);
}

std::vector<std::uint8_t> cutoff_logits(const std::vector<double>& logits,
                                        double eta) {
  std::vector<std::uint8_t> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = sigmoid(logits[i]) > eta ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> predict_hib(const Params& params, const QVector& q,
                                      std::int64_t bound, double eta) {
  return cutoff_logits(hib_logits(params, q, bound), eta);
}

bool predict_idp(const Params& params, const QVector& q, std::int64_t bound,
                 double eta, std::int64_t tau) {
  const std::int64_t positives = count_positive(hib_logits(params, q, bound), eta);
  return supp_tolerant(positives, tau) == 1;
}

std::vector<SweepRow> sweep(const Params& params,
                            const std::vector<LabeledExample>& dataset,
                            const std::vector<double>& etas,
                            const std::vector<std::int64_t>& taus,
                            std::int64_t bound) {
  if (etas.empty() || taus.empty()) {
    throw std::invalid_argument("sweep needs at least one eta and one tau");
  }
  std::vector<SweepRow> rows;
  rows.reserve(etas.size() * taus.size());
  for (double eta : etas) {
    for (std::int64_t tau : taus) {
      rows.push_back({eta, tau, 0, 0, {}, {}});
    }
  }

  std::int64_t total_idp = 0;
  std::vector<std::int64_t> counts(etas.size());
  for (const LabeledExample& record : dataset) {
    const std::vector<double> logits = hib_logits(params, record.q, bound);
    const bool truly_idp = record.positives.empty();
    if (truly_idp) ++total_idp;
    for (std::size_t e = 0; e < etas.size(); ++e) {
      counts[e] = count_positive(logits, etas[e]);
    }
    std::size_t r = 0;
    for (std::size_t e = 0; e < etas.size(); ++e) {
      for (std::size_t t = 0; t < taus.size(); ++t, ++r) {
        if (supp_tolerant(counts[e], taus[t]) == 1) {
          ++rows[r].predicted;
          if (truly_idp) ++rows[r].true_pos;
        }
      }
    }
  }

  for (SweepRow& row : rows) {
    if (row.predicted > 0) {
      row.precision = static_cast<double>(row.true_pos) /
                      static_cast<double>(row.predicted);
    }
    if (total_idp > 0) {
      row.sensitivity = static_cast<double>(row.true_pos) /
                        static_cast<double>(total_idp);
    }
  }
  return rows;
}

void save_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "eta,tau,predicted,true_pos,precision,sensitivity\n";
  char buf[64];
  auto ratio = [&](const std::optional<double>& v) -> std::string {
    if (!v) return "n/a";
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return buf;
  };
  for (const SweepRow& row : rows) {
    std::snprintf(buf, sizeof buf, "%.6g", row.eta);
    out << buf << ',' << row.tau << ',' << row.predicted << ','
        << row.true_pos << ',' << ratio(row.precision) << ','
        << ratio(row.sensitivity) << '\n';
  }
}

HilbertBasis approx_hilbert_basis_from_pred(const QVector& q,
                                            const RelevantSet& relevant,
                                            const std::vector<std::uint8_t>& pred) {
  if (relevant.dim() != q.dim() || pred.size() != relevant.size()) {
    throw std::invalid_argument("prediction length does not match the relevant set");
  }
  const int d = q.dim();
  std::vector<FppPoint> candidates;
  for (FppPoint& z : fpp_points(q)) {
    if (z.b == 0) continue;
    const BinIndex alpha = bin_of(z.weights, d);
    if (alpha.sum() > d + 1) {
      const std::optional<std::int32_t> rank = relevant.rank_of(alpha);
      if (!rank || pred[static_cast<std::size_t>(*rank)] == 0) continue;
    }
    candidates.push_back(std::move(z));
  }
  HilbertBasis basis;
  basis.generators = build_generators(q);
  basis.extras = reduce_candidates(q, candidates);
  return basis;
}

HilbertBasis approx_hilbert_basis(const Params& params, const QVector& q,
                                  const RelevantSet& relevant,
                                  std::int64_t bound, double eta) {
  return approx_hilbert_basis_from_pred(q, relevant,
                                        predict_hib(params, q, bound, eta));
}

namespace {

QVector grid_point(std::int64_t index, int d, std::int64_t bound) {
  std::vector<std::int64_t> entries(static_cast<std::size_t>(d));
  for (int j = d - 1; j >= 0; --j) {
    entries[static_cast<std::size_t>(j)] = 1 + index % bound;
    index /= bound;
  }
  return QVector(std::move(entries));
}

struct BlockResult {
  std::vector<SieveVerdict> positives;
  std::int64_t idp_total = 0;  // exhaustive only
};

}  // namespace

ScanReport scan_grid(const Params& params, int d, std::int64_t bound,
                     double eta, std::int64_t tau, bool verify,
                     bool exhaustive, int threads) {
  check_widths(params, d);
  const RelevantSet relevant = RelevantSet::build(d);
  if (static_cast<std::size_t>(params.widths.back()) != relevant.size()) {
    throw std::invalid_argument("model output width does not match the relevant set");
  }
  if (bound < 1) throw std::invalid_argument("bound must be positive");
  verify = verify || exhaustive;

  __int128 wide = 1;
  for (int j = 0; j < d; ++j) wide *= bound;
  if (wide > (static_cast<__int128>(1) << 40)) {
    throw std::invalid_argument("scan grid too large");
  }
  const std::int64_t total = static_cast<std::int64_t>(wide);

  const auto start = std::chrono::steady_clock::now();
  const std::int64_t block_size = std::max<std::int64_t>(1024, total / 8192);
  const std::int64_t num_blocks = (total + block_size - 1) / block_size;
  std::vector<BlockResult> blocks(static_cast<std::size_t>(num_blocks));

  std::atomic<std::int64_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    ForwardCache cache;
    std::vector<double> x;
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t block = next_block.fetch_add(1);
        if (block >= num_blocks) break;
        BlockResult& result = blocks[static_cast<std::size_t>(block)];
        const std::int64_t lo = block * block_size;
        const std::int64_t hi = std::min(total, lo + block_size);
        for (std::int64_t i = lo; i < hi; ++i) {
          QVector q = grid_point(i, d, bound);
          scale_input(q, bound, x);
          forward(params, x, cache);
          const std::int64_t positives = count_positive(cache.logits, eta);
          const bool predicted = supp_tolerant(positives, tau) == 1;
          std::optional<bool> exact;
          if (exhaustive || (verify && predicted)) exact = is_idp(q);
          if (exhaustive && exact == true) ++result.idp_total;
          if (predicted) {
            result.positives.push_back(
                {std::move(q), positives, true, verify ? exact : std::nullopt});
          }
        }
      }
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp<int>(workers, 1,
                            static_cast<int>(std::min<std::int64_t>(num_blocks, 256)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ScanReport report;
  report.d = d;
  report.bound = bound;
  report.eta = eta;
  report.tau = tau;
  report.scanned = total;
  std::int64_t idp_total = 0;
  for (BlockResult& block : blocks) {
    idp_total += block.idp_total;
    for (SieveVerdict& v : block.positives) {
      ++report.predicted_positive;
      if (v.idp_exact == true) ++report.verified_positive;
      report.positives.push_back(std::move(v));
    }
  }
  if (verify && report.predicted_positive > 0) {
    report.precision = static_cast<double>(report.verified_positive) /
                       static_cast<double>(report.predicted_positive);
  }
  if (exhaustive && idp_total > 0) {
    report.sensitivity = static_cast<double>(report.verified_positive) /
                         static_cast<double>(idp_total);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace idp
