// Command-line surface for the pipeline: exact queries, dataset generation,
// training, evaluation, threshold sweeps, and the grid scan.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idp/binning.hpp"
#include "idp/dataset.hpp"
#include "idp/hilbert.hpp"
#include "idp/metrics.hpp"
#include "idp/net.hpp"
#include "idp/qvector.hpp"
#include "idp/sieve.hpp"
#include "idp/simplex.hpp"
#include "idp/trainer.hpp"

namespace {

std::string join(std::span<const std::int64_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string ratio_str(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

std::vector<std::int32_t> parse_widths(const std::string& text) {
  std::vector<std::int32_t> widths;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    widths.push_back(
        static_cast<std::int32_t>(std::stol(text.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return widths;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    out.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_doubles(text)) out.push_back(static_cast<std::int64_t>(v));
  return out;
}

void cmd_exact(const std::string& q_text) {
  const idp::QVector q = idp::QVector::parse(q_text);
  const int d = q.dim();
  const idp::HilbertBasis basis = idp::hilbert_basis(q);
  const std::vector<std::int64_t> hs = idp::hstar(q);

  std::cout << "q: " << q.str() << "\n";
  std::cout << "d: " << d << "\n";
  std::cout << "N: " << q.volume() << "\n";
  std::cout << "h*: " << join(hs) << "\n";
  std::cout << "unimodal: " << (idp::is_unimodal(hs) ? "yes" : "no") << "\n";
  std::cout << "extras: " << basis.extras.size() << "\n";

  bool all_height_one = true;
  bool all_bins_low = true;
  for (const idp::FppPoint& z : basis.extras) {
    const idp::BinIndex alpha = idp::bin_of(z.weights, d);
    all_height_one = all_height_one && idp::height(z) == 1;
    all_bins_low = all_bins_low && alpha.sum() <= d + 1;
    std::cout << "  b=" << z.b << " height=" << idp::height(z) << " spatial=("
              << join(std::span(z.coords).subspan(1)) << ") weights=(";
    for (std::size_t i = 0; i < z.weights.numerators.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << z.weights.numerators[i] << '/' << z.weights.denominator;
    }
    std::cout << ") bin=(" << join(std::vector<std::int64_t>(
                                  alpha.entries.begin(), alpha.entries.end()))
              << ")\n";
  }
  std::cout << "idp_heights: " << (all_height_one ? "true" : "false") << "\n";
  std::cout << "idp_bins: " << (all_bins_low ? "true" : "false") << "\n";
}

void cmd_gen(int d, std::int64_t bound, std::int64_t count, std::uint64_t seed,
             const std::string& out, int threads) {
  const idp::RelevantSet relevant = idp::RelevantSet::build(d);
  const idp::Dataset dataset =
      idp::generate_dataset(d, bound, count, seed, relevant, threads);
  idp::save_dataset(dataset, relevant, out);
  std::cout << "wrote " << dataset.records.size() << " records (relevant="
            << relevant.size() << ") to " << out << "\n";
}

void cmd_train(const std::string& data, const std::string& out,
               const std::string& widths_text, double epsilon, double beta,
               std::int32_t batch, std::uint64_t seed, double l2,
               std::int64_t updates, std::int64_t eval_every,
               std::int32_t patience, double val_fraction) {
  const idp::Dataset dataset = idp::load_dataset(data);
  const idp::RelevantSet relevant = idp::RelevantSet::build(dataset.d);
  const auto [train_set, val_set] =
      idp::split(dataset.records, val_fraction, seed);

  idp::NetSpec spec;
  spec.widths.push_back(dataset.d);
  for (std::int32_t w : parse_widths(widths_text)) spec.widths.push_back(w);
  spec.widths.push_back(static_cast<std::int32_t>(relevant.size()));
  spec.epsilon = epsilon;
  spec.beta = beta;
  spec.batch_size = batch;
  spec.seed = seed;
  spec.l2 = l2;

  idp::TrainOptions options;
  options.updates = updates;
  options.eval_every = eval_every;
  options.patience = patience;
  options.bound = dataset.bound;

  std::cout << "train=" << train_set.size() << " val=" << val_set.size()
            << " widths=";
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    std::cout << (i ? "," : "") << spec.widths[i];
  }
  std::cout << "\n";

  const idp::TrainResult result =
      idp::train(spec, train_set, val_set, relevant, options);
  for (const idp::TrainLogEntry& entry : result.log) {
    std::printf("update %lld val_loss %.6f\n",
                static_cast<long long>(entry.update), entry.val_loss);
  }
  std::printf("best_update %lld best_val_loss %.6f initial_val_loss %.6f\n",
              static_cast<long long>(result.best_update), result.best_val_loss,
              result.initial_val_loss);
  idp::save_params(result.params, out);
  std::cout << "wrote model to " << out << "\n";
}

void cmd_eval(const std::string& model, const std::string& data, double eta,
              std::int64_t tau) {
  const idp::Params params = idp::load_params(model);
  const idp::Dataset dataset = idp::load_dataset(data);
  const idp::RelevantSet relevant = idp::RelevantSet::build(dataset.d);
  if (static_cast<std::size_t>(params.widths.back()) != relevant.size()) {
    throw std::invalid_argument("model output width does not match the relevant set");
  }

  idp::ConfusionTable bins;
  idp::ConfusionTable verdicts;
  std::vector<std::uint8_t> truth;
  for (const idp::LabeledExample& record : dataset.records) {
    const std::vector<std::uint8_t> pred =
        idp::predict_hib(params, record.q, dataset.bound, eta);
    truth.assign(relevant.size(), 0);
    for (std::int32_t rank : record.positives) {
      truth[static_cast<std::size_t>(rank)] = 1;
    }
    bins += idp::confusion(pred, truth);

    std::int64_t positives = 0;
    for (std::uint8_t p : pred) positives += p;
    const bool pred_idp = idp::supp_tolerant(positives, tau) == 1;
    const bool exact_idp = record.positives.empty();
    if (pred_idp && exact_idp) ++verdicts.tp;
    if (pred_idp && !exact_idp) ++verdicts.fp;
    if (!pred_idp && exact_idp) ++verdicts.fn;
    if (!pred_idp && !exact_idp) ++verdicts.tn;
  }

  std::cout << "bins: tn=" << bins.tn << " fp=" << bins.fp << " fn=" << bins.fn
            << " tp=" << bins.tp << "\n";
  std::cout << "bins: specificity=" << ratio_str(bins.specificity())
            << " sensitivity=" << ratio_str(bins.sensitivity())
            << " precision=" << ratio_str(bins.precision()) << "\n";
  std::cout << "idp: tn=" << verdicts.tn << " fp=" << verdicts.fp
            << " fn=" << verdicts.fn << " tp=" << verdicts.tp << "\n";
  std::cout << "idp: specificity=" << ratio_str(verdicts.specificity())
            << " sensitivity=" << ratio_str(verdicts.sensitivity())
            << " precision=" << ratio_str(verdicts.precision()) << "\n";
}

void cmd_sweep(const std::string& model, const std::string& data,
               const std::string& etas_text, const std::string& taus_text,
               const std::string& out) {
  const idp::Params params = idp::load_params(model);
  const idp::Dataset dataset = idp::load_dataset(data);
  const std::vector<idp::SweepRow> rows =
      idp::sweep(params, dataset.records, parse_doubles(etas_text),
                 parse_ints(taus_text), dataset.bound);
  if (out.empty()) {
    idp::save_sweep_csv(std::cout, rows);
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open " + out);
    idp::save_sweep_csv(file, rows);
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  }
}

void cmd_scan(const std::string& model, int d, std::int64_t bound, double eta,
              std::int64_t tau, bool verify, bool exhaustive, int threads,
              const std::string& out) {
  const idp::Params params = idp::load_params(model);
  const idp::ScanReport report =
      idp::scan_grid(params, d, bound, eta, tau, verify, exhaustive, threads);
  std::cout << "d: " << report.d << "\n";
  std::cout << "bound: " << report.bound << "\n";
  std::cout << "eta: " << report.eta << "\n";
  std::cout << "tau: " << report.tau << "\n";
  std::cout << "scanned: " << report.scanned << "\n";
  std::cout << "predicted_positive: " << report.predicted_positive << "\n";
  std::cout << "verified_positive: " << report.verified_positive << "\n";
  std::cout << "precision: " << ratio_str(report.precision) << "\n";
  std::cout << "sensitivity: " << ratio_str(report.sensitivity) << "\n";
  std::printf("seconds: %.3f\n", report.seconds);
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open " + out);
    for (const idp::SieveVerdict& verdict : report.positives) {
      file << verdict.q.str() << "\n";
    }
    std::cout << "wrote " << report.positives.size() << " positives to " << out
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact IDP core, Hilbert-basis bin approximator, and prediction "
               "sieve for Delta(1,q) lattice simplices"};
  app.require_subcommand(1);

  std::string q_text;
  std::string data = "dataset.txt";
  std::string model = "model.txt";
  std::string out;
  std::string widths = "100,400,800,3000";
  std::string etas = "0.5";
  std::string taus = "0";
  int d = 4;
  std::int64_t bound = 25;
  std::int64_t count = 50'000;
  std::uint64_t seed = 0;
  int threads = 0;
  double epsilon = 0.001;
  double beta = 10.0;
  std::int32_t batch = 10;
  double l2 = 0.0;
  std::int64_t updates = 100'000;
  std::int64_t eval_every = 1'000;
  std::int32_t patience = 10;
  double val_fraction = 0.1;
  double eta = 0.5;
  std::int64_t tau = 0;
  bool verify = false;
  bool exhaustive = false;

  CLI::App* exact = app.add_subcommand(
      "exact", "Exact report for one q-vector: volume, h*, Hilbert basis, IDP");
  exact->add_option("q", q_text, "comma-separated q-vector, e.g. 4,10,14,14")
      ->required();
  exact->callback([&] { cmd_exact(q_text); });

  CLI::App* gen =
      app.add_subcommand("gen", "Generate an exactly labeled dataset");
  gen->add_option("--d", d, "dimension")->capture_default_str();
  gen->add_option("--bound", bound, "entries drawn from 1..bound")
      ->capture_default_str();
  gen->add_option("--count", count, "number of records")->capture_default_str();
  gen->add_option("--seed", seed, "generation seed")->capture_default_str();
  gen->add_option("--out", out, "output dataset file")->required();
  gen->add_option("--threads", threads, "worker threads, 0 = auto")
      ->capture_default_str();
  gen->callback([&] { cmd_gen(d, bound, count, seed, out, threads); });

  CLI::App* train = app.add_subcommand("train", "Train the approximator");
  train->add_option("--data", data, "labeled dataset file")->required();
  train->add_option("--out", out, "output model file")->required();
  train->add_option("--widths", widths, "hidden layer widths")
      ->capture_default_str();
  train->add_option("--epsilon", epsilon, "learning rate")->capture_default_str();
  train->add_option("--beta", beta, "positive-class balance")
      ->capture_default_str();
  train->add_option("--batch", batch, "mini-batch size")->capture_default_str();
  train->add_option("--seed", seed, "init/batch/split seed")
      ->capture_default_str();
  train->add_option("--l2", l2, "ridge penalty")->capture_default_str();
  train->add_option("--updates", updates, "SGD update budget")
      ->capture_default_str();
  train->add_option("--eval-every", eval_every, "validation cadence")
      ->capture_default_str();
  train->add_option("--patience", patience,
                    "non-improving evaluations before early stop")
      ->capture_default_str();
  train->add_option("--val-fraction", val_fraction, "validation fraction")
      ->capture_default_str();
  train->callback([&] {
    cmd_train(data, out, widths, epsilon, beta, batch, seed, l2, updates,
              eval_every, patience, val_fraction);
  });

  CLI::App* eval =
      app.add_subcommand("eval", "Confusion tables of a model on a dataset");
  eval->add_option("--model", model, "model file")->required();
  eval->add_option("--data", data, "labeled dataset file")->required();
  eval->add_option("--eta", eta, "cutoff")->capture_default_str();
  eval->add_option("--tau", tau, "tolerance")->capture_default_str();
  eval->callback([&] { cmd_eval(model, data, eta, tau); });

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Metrics over an eta x tau grid, CSV");
  sweep_cmd->add_option("--model", model, "model file")->required();
  sweep_cmd->add_option("--data", data, "labeled dataset file")->required();
  sweep_cmd->add_option("--etas", etas, "comma-separated cutoffs")
      ->capture_default_str();
  sweep_cmd->add_option("--taus", taus, "comma-separated tolerances")
      ->capture_default_str();
  sweep_cmd->add_option("--out", out, "output CSV file (stdout if omitted)");
  sweep_cmd->callback([&] { cmd_sweep(model, data, etas, taus, out); });

  CLI::App* scan =
      app.add_subcommand("scan", "Predict-then-verify over the full grid");
  scan->add_option("--model", model, "model file")->required();
  scan->add_option("--d", d, "dimension")->capture_default_str();
  scan->add_option("--bound", bound, "grid bound")->capture_default_str();
  scan->add_option("--eta", eta, "cutoff")->capture_default_str();
  scan->add_option("--tau", tau, "tolerance")->capture_default_str();
  scan->add_flag("--verify", verify, "run the exact core on predicted positives");
  scan->add_flag("--exhaustive", exhaustive,
                 "exact ground truth over the whole grid (implies --verify)");
  scan->add_option("--threads", threads, "worker threads, 0 = auto")
      ->capture_default_str();
  scan->add_option("--out", out, "positives file, one q-vector per line");
  scan->callback([&] {
    cmd_scan(model, d, bound, eta, tau, verify, exhaustive, threads, out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
