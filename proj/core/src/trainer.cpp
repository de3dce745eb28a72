#include "idp/trainer.hpp"

#include <stdexcept>

#include "idp/rng.hpp"

namespace idp {

namespace {

constexpr std::uint64_t kBatchStreamKey = 0x62617463;

void fill_labels(const LabeledExample& record, std::vector<double>& labels,
                 std::size_t width) {
  labels.assign(width, 0.0);
  for (std::int32_t rank : record.positives) {
    labels.at(static_cast<std::size_t>(rank)) = 1.0;
  }
}

}  // namespace

void scale_input(const QVector& q, std::int64_t bound, std::vector<double>& x) {
  x.resize(q.dim());
  for (int i = 0; i < q.dim(); ++i) {
    x[i] = static_cast<double>(q.entries()[i]) / static_cast<double>(bound);
  }
}

double mean_bce(const Params& params, const std::vector<LabeledExample>& set,
                const RelevantSet& relevant, double beta, std::int64_t bound) {
  if (set.empty()) throw std::invalid_argument("empty evaluation set");
  if (params.widths.empty() ||
      static_cast<std::size_t>(params.widths.back()) != relevant.size()) {
    throw std::invalid_argument("output width does not match the relevant set");
  }
  ForwardCache cache;
  std::vector<double> x, labels;
  double total = 0;
  for (const LabeledExample& record : set) {
    scale_input(record.q, bound, x);
    forward(params, x, cache);
    fill_labels(record, labels, cache.logits.size());
    total += loss_bce(cache.logits, labels, beta);
  }
  return total / static_cast<double>(set.size());
}

TrainResult train(const NetSpec& spec,
                  const std::vector<LabeledExample>& train_set,
                  const std::vector<LabeledExample>& val_set,
                  const RelevantSet& relevant, const TrainOptions& options) {
  spec.validate();
  if (train_set.empty() || val_set.empty()) {
    throw std::invalid_argument("training and validation sets must be non-empty");
  }
  if (spec.widths.front() != relevant.dim()) {
    throw std::invalid_argument("input width must equal the q-vector dimension");
  }
  if (static_cast<std::size_t>(spec.widths.back()) != relevant.size()) {
    throw std::invalid_argument("output width must equal the relevant-set size");
  }
  if (options.updates < 0 || options.eval_every < 1 || options.patience < 1 ||
      options.bound < 1) {
    throw std::invalid_argument("bad training options");
  }

  TrainResult result;
  Params params = init_params(spec);
  result.params = params;
  result.initial_val_loss =
      mean_bce(params, val_set, relevant, spec.beta, options.bound);
  result.best_val_loss = result.initial_val_loss;
  result.best_update = 0;
  result.log.push_back({0, result.initial_val_loss});

  CounterRng batch_rng = CounterRng(spec.seed).substream(kBatchStreamKey);
  const std::size_t n_train = train_set.size();
  std::vector<Gradient> batch(static_cast<std::size_t>(spec.batch_size));
  ForwardCache cache;
  std::vector<double> x, labels;
  int bad_evals = 0;

  for (std::int64_t update = 1; update <= options.updates; ++update) {
    for (std::int32_t slot = 0; slot < spec.batch_size; ++slot) {
      const std::size_t idx = static_cast<std::size_t>(batch_rng.next() % n_train);
      const LabeledExample& record = train_set[idx];
      scale_input(record.q, options.bound, x);
      fill_labels(record, labels, static_cast<std::size_t>(spec.widths.back()));
      backward(params, x, labels, Loss::kBce, spec.beta,
               batch[static_cast<std::size_t>(slot)], cache);
    }
    params = sgd_step(std::move(params), batch, spec.epsilon, spec.l2);

    if (update % options.eval_every == 0 || update == options.updates) {
      const double val =
          mean_bce(params, val_set, relevant, spec.beta, options.bound);
      result.log.push_back({update, val});
      if (val < result.best_val_loss) {
        result.best_val_loss = val;
        result.best_update = update;
        result.params = params;
        bad_evals = 0;
      } else if (++bad_evals >= options.patience) {
        break;
      }
    }
  }
  return result;
}

}  // namespace idp
