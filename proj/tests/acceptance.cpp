// Acceptance gate: every numbered criterion below runs as one check and
// prints exactly one PASS/FAIL line. The binary exits non-zero if any
// criterion fails. Criteria with stated runtime budgets enforce them.
//
// Usage: idp_acceptance [--cli <path-to-idp-binary>]
// The determinism criterion shells out to the CLI when given, and falls back
// to the in-process pipeline otherwise.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idp/binning.hpp"
#include "idp/dataset.hpp"
#include "idp/hilbert.hpp"
#include "idp/metrics.hpp"
#include "idp/net.hpp"
#include "idp/qvector.hpp"
#include "idp/rng.hpp"
#include "idp/sieve.hpp"
#include "idp/simplex.hpp"
#include "idp/trainer.hpp"
#include "oracle.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

void require_near(double a, double b, double tol, const std::string& what) {
  if (!(std::abs(a - b) <= tol)) {
    std::ostringstream msg;
    msg << what << ": " << a << " vs " << b << " (tol " << tol << ")";
    throw Failure(msg.str());
  }
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string g_cli;
std::optional<idp::Params> g_trained;  // stashed by criterion 11 for 12

// shared grid for criteria 2 and 3: exhaustive d=2,3 with entries up to 6,
// plus 1,000 seeded random d=4 draws with entries up to 25
const std::vector<idp::QVector>& shared_grid() {
  static const std::vector<idp::QVector> grid = [] {
    std::vector<idp::QVector> g;
    for (std::int64_t a = 1; a <= 6; ++a) {
      for (std::int64_t b = 1; b <= 6; ++b) {
        g.emplace_back(std::vector<std::int64_t>{a, b});
        for (std::int64_t c = 1; c <= 6; ++c) {
          g.emplace_back(std::vector<std::int64_t>{a, b, c});
        }
      }
    }
    idp::CounterRng rng(2025);
    for (int i = 0; i < 1000; ++i) {
      std::vector<std::int64_t> entries(4);
      for (auto& e : entries) {
        e = 1 + static_cast<std::int64_t>(rng.next() % 25);
      }
      g.emplace_back(std::move(entries));
    }
    return g;
  }();
  return grid;
}

std::string criterion_1() {
  const auto start = Clock::now();
  const idp::QVector q = idp::QVector::parse("2,1");

  const idp::ConeBasis gens = idp::build_generators(q);
  require(gens.generators ==
              std::vector<std::vector<std::int64_t>>{
                  {1, 1, 0}, {1, 0, 1}, {1, -2, -1}},
          "ray generators differ");

  const std::vector<idp::FppPoint> pts = idp::fpp_points(q);
  require(pts.size() == 4, "expected N=4 parallelepiped points");
  const std::vector<std::vector<std::int64_t>> listed{
      {0, 0, 0}, {1, -1, 0}, {1, 0, 0}};
  const std::vector<std::vector<std::int32_t>> listed_bins{
      {0, 0, 0}, {0, 1, 1}, {1, 0, 0}};
  for (std::size_t i = 0; i < listed.size(); ++i) {
    const auto it =
        std::find_if(pts.begin(), pts.end(), [&](const idp::FppPoint& z) {
          return z.coords == listed[i];
        });
    require(it != pts.end(), "missing listed parallelepiped point");
    require(idp::bin_of(it->weights, 2).entries == listed_bins[i],
            "bin of listed point differs");
  }

  const idp::HilbertBasis basis = idp::hilbert_basis(q);
  require(basis.extras.size() == 2, "basis should add two points");
  require(basis.extras[0].coords == std::vector<std::int64_t>{1, 0, 0} &&
              basis.extras[1].coords == std::vector<std::int64_t>{1, -1, 0},
          "basis extras differ");
  require(idp::is_idp(q), "height criterion");
  require(idp::is_idp_bins(q), "bin criterion");

  const double secs = elapsed(start);
  require(secs < 1.0, "runtime budget 1 s exceeded");
  return "";
}

std::string criterion_2() {
  const auto start = Clock::now();
  std::int64_t checked = 0;
  for (const idp::QVector& q : shared_grid()) {
    for (const idp::FppPoint& z : idp::fpp_points(q)) {
      require(idp::height_from_bin(idp::bin_of(z.weights, q.dim())) ==
                  idp::height(z),
              "height formula violated at q=" + q.str());
      ++checked;
    }
  }
  const double secs = elapsed(start);
  require(secs < 60.0, "runtime budget 60 s exceeded");
  return std::to_string(checked) + " points";
}

std::string criterion_3() {
  std::int64_t idp_count = 0;
  for (const idp::QVector& q : shared_grid()) {
    const bool by_height = idp::is_idp(q);
    require(by_height == idp::is_idp_bins(q),
            "criteria disagree at q=" + q.str());
    if (by_height) ++idp_count;
  }
  return std::to_string(idp_count) + " of " +
         std::to_string(shared_grid().size()) + " are IDP";
}

std::string criterion_4() {
  std::int64_t count = 0;
  for (int d = 1; d <= 3; ++d) {
    std::vector<std::int64_t> entries(static_cast<std::size_t>(d), 0);
    for (;;) {
      const idp::QVector q(entries);
      std::vector<std::vector<std::int64_t>> coords;
      for (const idp::FppPoint& z : idp::fpp_points(q)) {
        coords.push_back(z.coords);
      }
      std::sort(coords.begin(), coords.end());
      require(coords == idp::testing::oracle_fpp(q),
              "oracle mismatch at q=" + q.str());
      ++count;
      int k = d;
      while (--k >= 0 && ++entries[static_cast<std::size_t>(k)] > 5) {
        entries[static_cast<std::size_t>(k)] = 0;
      }
      if (k < 0) break;
    }
  }
  return std::to_string(count) + " q-vectors";
}

std::string criterion_5() {
  const auto start = Clock::now();
  for (const char* text :
       {"1,1,1,1", "2,2,2,7", "1,3,24,1", "24,24,23,12", "1,1,3,9",
        "1,2,14,10", "7,7,1,7", "12,6,1,1", "16,8,4,2", "9,1,1,9"}) {
    require(idp::is_idp(idp::QVector::parse(text)),
            std::string("expected IDP: ") + text);
  }
  for (const char* text : {"1,2,10,2", "2,3,4,7", "4,3,2,5", "11,6,9,6"}) {
    require(!idp::is_idp(idp::QVector::parse(text)),
            std::string("expected non-IDP: ") + text);
  }
  const double secs = elapsed(start);
  require(secs < 5.0, "runtime budget 5 s exceeded");
  return "10 positive, 4 negative";
}

std::string criterion_6() {
  const idp::RelevantSet relevant = idp::RelevantSet::build(4);
  const idp::HibVector labels =
      idp::hib(idp::QVector::parse("4,10,14,14"), relevant);
  require(labels.positives.size() == 14,
          "expected 14 positives, got " +
              std::to_string(labels.positives.size()));
  return "relevant set " + std::to_string(relevant.size());
}

std::string criterion_7() {
  constexpr double tol = 1e-12;
  idp::Params p;
  p.widths = {1, 2, 1};
  p.layers.resize(2);
  p.layers[0].w = {0.75, -0.5};
  p.layers[0].b = {-0.75, 1.0};
  p.layers[1].w = {1.0, 1.0};
  p.layers[1].b = {-0.5};

  require_near(idp::forward(p, std::vector<double>{1.5})[0], 0.125, tol,
               "f(1.5)");
  // left piece 0.25x - 0.25 and right piece 0.75x - 1.25
  require_near(idp::forward(p, std::vector<double>{1.0})[0], 0.0, tol,
               "f(1.0)");
  require_near(idp::forward(p, std::vector<double>{2.0})[0], 0.25, tol,
               "f(2.0)");
  require_near(idp::forward(p, std::vector<double>{2.5})[0], 0.625, tol,
               "f(2.5)");
  require_near(idp::forward(p, std::vector<double>{3.0})[0], 1.0, tol,
               "f(3.0)");

  const std::vector<double> x{1.5};
  const std::vector<double> y{std::log(1.5)};
  idp::Gradient grad;
  const double d0 = idp::backward(p, x, y, idp::Loss::kEuclid, 1.0, grad);

  const std::vector<double> expected{-1.5, -1.5, -1.0, -1.0, -0.375, -0.25, -1.0};
  std::vector<double> flat;
  for (const auto& layer : grad.layers) {
    flat.insert(flat.end(), layer.w.begin(), layer.w.end());
    flat.insert(flat.end(), layer.b.begin(), layer.b.end());
  }
  require(flat.size() == expected.size(), "gradient length");
  for (std::size_t i = 0; i < flat.size(); ++i) {
    require_near(flat[i], expected[i], tol,
                 "gradient entry " + std::to_string(i));
  }

  const idp::Params updated = idp::sgd_step(p, {grad}, 0.02);
  require_near(updated.layers[0].w[0], 0.78, tol, "W1'[0]");
  require_near(updated.layers[0].w[1], -0.47, tol, "W1'[1]");
  require_near(updated.layers[0].b[0], -0.73, tol, "b1'[0]");
  require_near(updated.layers[0].b[1], 1.02, tol, "b1'[1]");
  require_near(updated.layers[1].b[0], -0.48, tol, "b2'[0]");

  idp::Gradient scratch;
  const double d1 =
      idp::backward(updated, x, y, idp::Loss::kEuclid, 1.0, scratch);
  require(d1 < d0, "loss did not decrease after the update");
  return "";
}

std::string criterion_8() {
  const double t = 1.0 / std::sqrt(7.0);
  require_near(idp::sigmoid(t), 0.593, 5e-4, "sigma(1/sqrt 7)");
  require_near(idp::sigmoid(-t), 0.407, 5e-4, "sigma(-1/sqrt 7)");
  return "";
}

std::string criterion_9() {
  idp::CounterRng rng(909);
  int done = 0;
  int attempts = 0;
  double worst = 0;

  while (done < 100 && attempts < 2000) {
    ++attempts;
    std::vector<std::int32_t> widths{
        static_cast<std::int32_t>(1 + rng.next() % 4),
        static_cast<std::int32_t>(1 + rng.next() % 5),
        static_cast<std::int32_t>(1 + rng.next() % 5),
        static_cast<std::int32_t>(1 + rng.next() % 3)};
    idp::NetSpec spec;
    spec.widths = widths;
    spec.seed = rng.next();
    idp::Params p = idp::init_params(spec);
    for (auto& layer : p.layers) {
      for (double& b : layer.b) b = 0.5 * (2.0 * rng.next_unit() - 1.0);
    }
    std::vector<double> x(static_cast<std::size_t>(widths.front()));
    for (double& v : x) v = 2.0 * rng.next_unit() - 1.0;

    // reject draws adjacent to a ReLU kink, where the loss surface is not
    // differentiable and finite differences are meaningless
    idp::ForwardCache cache;
    idp::forward(p, x, cache);
    bool kink = false;
    for (const auto& pre : cache.pre) {
      for (double v : pre) kink = kink || std::abs(v) < 1e-3;
    }
    if (kink) continue;

    const bool use_euclid = done % 2 == 0;
    std::vector<double> target(static_cast<std::size_t>(widths.back()));
    if (use_euclid) {
      for (double& v : target) v = 2.0 * rng.next_unit() - 1.0;
      if (idp::loss_euclid(cache.logits, target) < 1e-3) continue;
    } else {
      for (double& v : target) v = rng.next() % 2 ? 1.0 : 0.0;
    }
    const idp::Loss loss = use_euclid ? idp::Loss::kEuclid : idp::Loss::kBce;
    const double beta = use_euclid ? 1.0 : 10.0;

    idp::Gradient grad;
    idp::backward(p, x, target, loss, beta, grad);

    std::vector<double*> slots;
    std::vector<double> analytic;
    for (std::size_t k = 0; k < p.layers.size(); ++k) {
      for (std::size_t i = 0; i < p.layers[k].w.size(); ++i) {
        slots.push_back(&p.layers[k].w[i]);
        analytic.push_back(grad.layers[k].w[i]);
      }
      for (std::size_t i = 0; i < p.layers[k].b.size(); ++i) {
        slots.push_back(&p.layers[k].b[i]);
        analytic.push_back(grad.layers[k].b[i]);
      }
    }
    const double h = 1e-5;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const double save = *slots[i];
      *slots[i] = save + h;
      const double up = use_euclid
                            ? idp::loss_euclid(idp::forward(p, x), target)
                            : idp::loss_bce(idp::forward(p, x), target, beta);
      *slots[i] = save - h;
      const double down =
          use_euclid ? idp::loss_euclid(idp::forward(p, x), target)
                     : idp::loss_bce(idp::forward(p, x), target, beta);
      *slots[i] = save;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(fd - analytic[i]) /
                                  std::max({1e-5, std::abs(fd),
                                            std::abs(analytic[i])}));
    }
    ++done;
  }
  require(done == 100, "kink rejection failed to find 100 clean cases");
  require(worst < 1e-4, "max relative error " + std::to_string(worst));
  std::ostringstream note;
  note.precision(2);
  note << "max rel err " << std::scientific << worst;
  return note.str();
}

std::string criterion_10() {
  const idp::ConfusionTable t1{2808, 55, 0, 14};
  require(t1.specificity() && t1.sensitivity(), "ratios undefined");
  require_near(*t1.specificity(), 0.981, 5e-4, "table-1 specificity");
  require_near(*t1.sensitivity(), 1.00, 5e-4, "table-1 sensitivity");

  const idp::ConfusionTable t3{12'726'675, 1'573'167, 22'569, 88'482};
  require_near(*t3.specificity(), 0.890, 5e-4, "table-3 specificity");
  require_near(*t3.sensitivity(), 0.797, 5e-4, "table-3 sensitivity");
  return "";
}

std::string criterion_11() {
  const auto start = Clock::now();
  const idp::RelevantSet relevant = idp::RelevantSet::build(3);
  const idp::Dataset data = idp::generate_dataset(3, 10, 3000, 11, relevant);

  std::int64_t idp_count = 0;
  for (const idp::LabeledExample& r : data.records) {
    if (r.positives.empty()) ++idp_count;
  }
  const double base_rate =
      static_cast<double>(idp_count) / static_cast<double>(data.records.size());
  require(idp_count > 0, "degenerate sample: no IDP examples");

  const std::vector<double> etas{0.5, 0.75, 0.9, 0.95, 0.99};
  const std::vector<std::int64_t> taus{0, 1, 2, 3, 5, 8, 13, 21};

  int passes = 0;
  double best_precision = 0;
  for (const std::uint64_t seed : {101ull, 202ull, 303ull}) {
    const auto [train_set, val_set] = idp::split(data.records, 0.1, seed);

    idp::NetSpec spec;
    spec.widths = {3, 32, 64, static_cast<std::int32_t>(relevant.size())};
    spec.epsilon = 0.01;
    spec.beta = 10.0;
    spec.batch_size = 10;
    spec.seed = seed;

    idp::TrainOptions options;
    options.updates = 5000;
    options.eval_every = 500;
    options.patience = 10;
    options.bound = 10;

    const idp::TrainResult result =
        idp::train(spec, train_set, val_set, relevant, options);
    if (!g_trained) g_trained = result.params;

    const bool improved = result.best_val_loss < result.initial_val_loss;
    bool useful = false;
    for (const idp::SweepRow& row :
         idp::sweep(result.params, data.records, etas, taus, 10)) {
      if (!row.precision) continue;
      best_precision = std::max(best_precision, *row.precision);
      if (row.true_pos >= 5 && *row.precision >= 2.0 * base_rate) {
        useful = true;
      }
    }
    if (improved && useful) ++passes;
  }

  const double secs = elapsed(start);
  require(secs <= 300.0, "runtime budget 300 s exceeded");
  require(passes >= 2, "only " + std::to_string(passes) + " of 3 seeds passed");

  std::ostringstream note;
  note.precision(3);
  note << passes << "/3 seeds, base rate " << base_rate << ", best precision "
       << best_precision;
  return note.str();
}

std::string criterion_12() {
  idp::Params model;
  if (g_trained) {
    model = *g_trained;
  } else {
    // fallback when criterion 11 aborted early: a quick small train
    const idp::RelevantSet relevant = idp::RelevantSet::build(3);
    const idp::Dataset data = idp::generate_dataset(3, 10, 300, 12, relevant);
    const auto [train_set, val_set] = idp::split(data.records, 0.2, 12);
    idp::NetSpec spec;
    spec.widths = {3, 16, static_cast<std::int32_t>(relevant.size())};
    spec.seed = 12;
    idp::TrainOptions options;
    options.updates = 300;
    options.eval_every = 100;
    options.bound = 10;
    model = idp::train(spec, train_set, val_set, relevant, options).params;
  }

  idp::CounterRng rng(606);
  std::vector<idp::QVector> inputs;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::int64_t> entries(3);
    for (auto& e : entries) e = 1 + static_cast<std::int64_t>(rng.next() % 10);
    inputs.emplace_back(std::move(entries));
  }

  for (const idp::QVector& q : inputs) {
    const std::vector<double> logits = idp::hib_logits(model, q, 10);
    std::size_t last = logits.size() + 1;
    for (int step = 0; step <= 20; ++step) {
      const double eta = static_cast<double>(step) / 20.0;
      const std::vector<std::uint8_t> pred = idp::cutoff_logits(logits, eta);
      const std::size_t count = static_cast<std::size_t>(
          std::count(pred.begin(), pred.end(), std::uint8_t{1}));
      require(count <= last, "positive count increased with eta at q=" + q.str());
      last = count;
    }
  }

  std::int64_t last_verdicts = -1;
  for (std::int64_t tau = 0; tau <= 30; ++tau) {
    std::int64_t verdicts = 0;
    for (const idp::QVector& q : inputs) {
      if (idp::predict_idp(model, q, 10, 0.9, tau)) ++verdicts;
    }
    require(verdicts >= last_verdicts, "verdict count decreased with tau");
    last_verdicts = verdicts;
  }
  return "200 inputs";
}

bool files_equal(const std::filesystem::path& a,
                 const std::filesystem::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

std::string criterion_13() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "idp_acceptance_tmp";
  fs::create_directories(dir);
  const fs::path a1 = dir / "a1.txt", a2 = dir / "a2.txt";
  const fs::path m1 = dir / "m1.txt", m2 = dir / "m2.txt";
  std::string mode;

  if (!g_cli.empty()) {
    mode = "cli";
    const auto run = [&](const std::string& args) {
      const std::string cmd =
          '"' + g_cli + "\" " + args + " > /dev/null 2>&1";
      require(std::system(cmd.c_str()) == 0, "command failed: " + args);
    };
    run("gen --d 2 --bound 6 --count 300 --seed 5 --out " + a1.string());
    run("gen --d 2 --bound 6 --count 300 --seed 5 --out " + a2.string());
    run("train --data " + a1.string() + " --out " + m1.string() +
        " --widths 8 --updates 300 --eval-every 100 --seed 9");
    run("train --data " + a2.string() + " --out " + m2.string() +
        " --widths 8 --updates 300 --eval-every 100 --seed 9");
  } else {
    mode = "in-process";
    const idp::RelevantSet relevant = idp::RelevantSet::build(2);
    for (const fs::path* out : {&a1, &a2}) {
      idp::save_dataset(idp::generate_dataset(2, 6, 300, 5, relevant), relevant,
                        *out);
    }
    for (const fs::path* out : {&m1, &m2}) {
      const idp::Dataset data = idp::load_dataset(a1);
      const auto [train_set, val_set] = idp::split(data.records, 0.1, 9);
      idp::NetSpec spec;
      spec.widths = {2, 8, static_cast<std::int32_t>(relevant.size())};
      spec.seed = 9;
      idp::TrainOptions options;
      options.updates = 300;
      options.eval_every = 100;
      options.bound = 6;
      idp::save_params(
          idp::train(spec, train_set, val_set, relevant, options).params, *out);
    }
  }

  const bool data_same = files_equal(a1, a2);
  const bool model_same = files_equal(m1, m2);
  fs::remove_all(dir);
  require(data_same, "dataset files differ between runs");
  require(model_same, "model files differ between runs");
  return mode;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
  }

  struct Criterion {
    const char* name;
    std::function<std::string()> body;
  };
  const std::vector<Criterion> criteria{
      {"Example 2.5 end-to-end", criterion_1},
      {"height-from-bin formula on grids", criterion_2},
      {"dual IDP criteria agree", criterion_3},
      {"closed form equals box-scan oracle", criterion_4},
      {"published IDP spot checks", criterion_5},
      {"HIB cardinality of (4,10,14,14)", criterion_6},
      {"worked network example numerics", criterion_7},
      {"sigmoid values at +-1/sqrt(7)", criterion_8},
      {"backprop vs finite differences", criterion_9},
      {"confusion table arithmetic", criterion_10},
      {"desk-scale training and sieve lift", criterion_11},
      {"threshold monotonicity on a trained model", criterion_12},
      {"gen+train determinism", criterion_13},
  };

  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    std::string verdict = "PASS";
    std::string note;
    try {
      note = criteria[i].body();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      note = e.what();
    }
    if (verdict == "PASS") ++passed;
    std::printf("[%2zu] %s  %-43s (%6.2f s)%s%s\n", i + 1, verdict.c_str(),
                criteria[i].name, elapsed(start), note.empty() ? "" : " ",
                note.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/13 criteria passed\n", passed);
  return passed == 13 ? 0 : 1;
}
