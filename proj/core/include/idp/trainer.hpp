#pragma once

#include <cstdint>
#include <vector>

#include "idp/binning.hpp"
#include "idp/dataset.hpp"
#include "idp/net.hpp"

namespace idp {

struct TrainOptions {
  std::int64_t updates = 100'000;
  std::int64_t eval_every = 1'000;  // validation cadence in updates
  std::int32_t patience = 10;       // consecutive non-improving evaluations
  std::int64_t bound = 25;          // input scale: x_i = q_i / bound
};

struct TrainLogEntry {
  std::int64_t update = 0;
  double val_loss = 0;
};

struct TrainResult {
  Params params;  // parameters with the best validation loss
  std::vector<TrainLogEntry> log;
  std::int64_t best_update = 0;
  double initial_val_loss = 0;
  double best_val_loss = 0;
};

// Mini-batch SGD over the balanced BCE loss. Batch examples are drawn
// uniformly from the training split (update-major, slot-minor draw order),
// the mean batch gradient is applied per update, and the mean validation
// loss is recorded every eval_every updates. Stops at the update budget or
// after `patience` consecutive evaluations without improvement; returns the
// best-validation parameters either way.
TrainResult train(const NetSpec& spec,
                  const std::vector<LabeledExample>& train_set,
                  const std::vector<LabeledExample>& val_set,
                  const RelevantSet& relevant, const TrainOptions& options);

// Mean per-example BCE over a labeled set.
double mean_bce(const Params& params, const std::vector<LabeledExample>& set,
                const RelevantSet& relevant, double beta, std::int64_t bound);

void scale_input(const QVector& q, std::int64_t bound, std::vector<double>& x);

}  // namespace idp
