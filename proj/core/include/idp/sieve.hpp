// Prediction side of the pipeline: cutoff/tolerance verdicts from a trained
// net, threshold sweeps over labeled data, the approximate Hilbert basis of
// Remark 5.2, and the full-grid predict-then-verify scan.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "idp/binning.hpp"
#include "idp/dataset.hpp"
#include "idp/hilbert.hpp"
#include "idp/net.hpp"
#include "idp/qvector.hpp"

namespace idp {

// Raw network outputs for q, one logit per relevant bin. Inputs are scaled
// by the same bound the model was trained with.
std::vector<double> hib_logits(const Params& params, const QVector& q,
                               std::int64_t bound);

// cutoff ∘ σ applied entry-wise: positive iff σ(logit) > eta.
std::vector<std::uint8_t> cutoff_logits(const std::vector<double>& logits,
                                        double eta);

// Predicted HIB vector over the relevant set (composite cutoff ∘ σ ∘ f̂).
std::vector<std::uint8_t> predict_hib(const Params& params, const QVector& q,
                                      std::int64_t bound, double eta);

// Predicted IDP: at most tau positive relevant bins.
bool predict_idp(const Params& params, const QVector& q, std::int64_t bound,
                 double eta, std::int64_t tau);

struct SweepRow {
  double eta = 0;
  std::int64_t tau = 0;
  std::int64_t predicted = 0;  // examples predicted IDP
  std::int64_t true_pos = 0;   // of those, exactly IDP
  std::optional<double> precision;
  std::optional<double> sensitivity;
};

// One row per (eta, tau) pair, etas outer. Logits are computed once per
// example and reused across the whole grid. Ground truth for an example is
// IDP iff its label set is empty (Corollary 2.2).
std::vector<SweepRow> sweep(const Params& params,
                            const std::vector<LabeledExample>& dataset,
                            const std::vector<double>& etas,
                            const std::vector<std::int64_t>& taus,
                            std::int64_t bound);

void save_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Reduction of the candidate set {generators} ∪ {FPP points in non-relevant
// bins} ∪ {FPP points in predicted-positive relevant bins}. With pred ⊇
// hib(q) the candidates contain the true basis and the result is exact.
HilbertBasis approx_hilbert_basis_from_pred(const QVector& q,
                                            const RelevantSet& relevant,
                                            const std::vector<std::uint8_t>& pred);

HilbertBasis approx_hilbert_basis(const Params& params, const QVector& q,
                                  const RelevantSet& relevant,
                                  std::int64_t bound, double eta);

struct SieveVerdict {
  QVector q;
  std::int64_t predicted_positive_bins = 0;
  bool idp_predicted = false;
  std::optional<bool> idp_exact;  // filled by verification
};

struct ScanReport {
  int d = 0;
  std::int64_t bound = 0;
  double eta = 0;
  std::int64_t tau = 0;
  std::int64_t scanned = 0;
  std::int64_t predicted_positive = 0;
  std::int64_t verified_positive = 0;       // meaningful with verify
  std::optional<double> precision;          // verified / predicted
  std::optional<double> sensitivity;        // needs exhaustive ground truth
  double seconds = 0;
  std::vector<SieveVerdict> positives;      // lexicographic order
};

// Full-grid scan over {1,…,bound}^d in lexicographic order. verify fills
// idp_exact on each predicted positive; exhaustive additionally labels the
// whole grid so sensitivity is known. Parallel over fixed-size chunks merged
// in order, so output does not depend on the worker count (threads = 0 picks
// the hardware concurrency).
ScanReport scan_grid(const Params& params, int d, std::int64_t bound,
                     double eta, std::int64_t tau, bool verify,
                     bool exhaustive, int threads = 0);

}  // namespace idp
