#include "idp/net.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "idp/rng.hpp"

namespace idp {

namespace {

double softplus(double x) {
  // log(1 + e^x) without exponentiating a large positive argument
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void check_shapes(const Params& p) {
  if (p.widths.size() < 2 || p.layers.size() + 1 != p.widths.size()) {
    throw std::invalid_argument("parameter layout inconsistent with widths");
  }
}

void matvec(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::vector<double>& out) {
  const std::size_t rows = b.size();
  const std::size_t cols = x.size();
  out.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    out[r] = acc;
  }
}

void reshape_like(Gradient& g, const Params& p) {
  g.widths = p.widths;
  g.layers.resize(p.layers.size());
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    g.layers[k].w.assign(p.layers[k].w.size(), 0.0);
    g.layers[k].b.assign(p.layers[k].b.size(), 0.0);
  }
}

}  // namespace

void NetSpec::validate() const {
  if (widths.size() < 2) {
    throw std::invalid_argument("network needs input and output widths");
  }
  for (std::int32_t w : widths) {
    if (w < 1) throw std::invalid_argument("layer widths must be >= 1");
  }
  if (!(epsilon > 0)) throw std::invalid_argument("learning rate must be > 0");
  if (!(beta >= 1)) throw std::invalid_argument("balance must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (l2 < 0) throw std::invalid_argument("l2 penalty must be >= 0");
}

std::size_t Params::count() const {
  std::size_t n = 0;
  for (const Layer& layer : layers) n += layer.w.size() + layer.b.size();
  return n;
}

Params init_params(const NetSpec& spec) {
  spec.validate();
  Params p;
  p.widths = spec.widths;
  p.layers.resize(spec.widths.size() - 1);
  CounterRng rng(spec.seed);
  for (std::size_t k = 0; k + 1 < spec.widths.size(); ++k) {
    const std::size_t fan_in = static_cast<std::size_t>(spec.widths[k]);
    const std::size_t fan_out = static_cast<std::size_t>(spec.widths[k + 1]);
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Params::Layer& layer = p.layers[k];
    layer.w.resize(fan_in * fan_out);
    for (double& v : layer.w) v = s * (2.0 * rng.next_unit() - 1.0);
    layer.b.assign(fan_out, 0.0);
  }
  return p;
}

void relu_inplace(std::span<double> x) {
  for (double& v : x) v = std::max(0.0, v);
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void forward(const Params& p, std::span<const double> x, ForwardCache& cache) {
  check_shapes(p);
  if (x.size() != static_cast<std::size_t>(p.widths.front())) {
    throw std::invalid_argument("input length does not match network width");
  }
  const std::size_t hidden = p.layers.size() - 1;
  cache.act.resize(hidden + 1);
  cache.pre.resize(hidden);
  cache.act[0].assign(x.begin(), x.end());
  for (std::size_t k = 0; k < hidden; ++k) {
    matvec(p.layers[k].w, p.layers[k].b, cache.act[k], cache.pre[k]);
    cache.act[k + 1] = cache.pre[k];
    relu_inplace(cache.act[k + 1]);
  }
  matvec(p.layers[hidden].w, p.layers[hidden].b, cache.act[hidden],
         cache.logits);
}

std::vector<double> forward(const Params& p, std::span<const double> x) {
  ForwardCache cache;
  forward(p, x, cache);
  return std::move(cache.logits);
}

double loss_euclid(std::span<const double> logits, std::span<const double> y) {
  if (logits.size() != y.size()) {
    throw std::invalid_argument("output and target lengths differ");
  }
  double sq = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double diff = y[i] - logits[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

double loss_bce(std::span<const double> logits, std::span<const double> labels,
                double beta) {
  if (logits.size() != labels.size()) {
    throw std::invalid_argument("output and label lengths differ");
  }
  double total = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double t = logits[i];
    const double y = labels[i];
    total += (1.0 - y) * softplus(t) + beta * y * softplus(-t);
  }
  return total;
}

double backward(const Params& p, std::span<const double> x,
                std::span<const double> target, Loss loss, double beta,
                Gradient& grad, ForwardCache& cache) {
  forward(p, x, cache);
  reshape_like(grad, p);
  const std::vector<double>& logits = cache.logits;

  double value = 0;
  std::vector<double> delta(logits.size());
  switch (loss) {
    case Loss::kEuclid: {
      value = loss_euclid(logits, target);
      if (value > 0) {
        for (std::size_t i = 0; i < logits.size(); ++i) {
          delta[i] = (logits[i] - target[i]) / value;
        }
      }
      // at the cusp the subgradient is taken as zero
      break;
    }
    case Loss::kBce: {
      value = loss_bce(logits, target, beta);
      for (std::size_t i = 0; i < logits.size(); ++i) {
        const double t = logits[i];
        const double y = target[i];
        delta[i] = (1.0 - y) * sigmoid(t) - beta * y * sigmoid(-t);
      }
      break;
    }
  }

  for (std::size_t k = p.layers.size(); k-- > 0;) {
    const std::vector<double>& a = cache.act[k];
    Params::Layer& g = grad.layers[k];
    const std::size_t rows = delta.size();
    const std::size_t cols = a.size();
    for (std::size_t r = 0; r < rows; ++r) {
      double* gw = g.w.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) gw[c] = delta[r] * a[c];
      g.b[r] = delta[r];
    }
    if (k == 0) break;
    std::vector<double> prev(cols, 0.0);
    const std::vector<double>& w = p.layers[k].w;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* wr = w.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) prev[c] += wr[c] * delta[r];
    }
    const std::vector<double>& pre = cache.pre[k - 1];
    for (std::size_t c = 0; c < cols; ++c) {
      if (pre[c] <= 0) prev[c] = 0;  // ReLU derivative, 0 at the kink
    }
    delta = std::move(prev);
  }
  return value;
}

double backward(const Params& p, std::span<const double> x,
                std::span<const double> target, Loss loss, double beta,
                Gradient& grad) {
  ForwardCache cache;
  return backward(p, x, target, loss, beta, grad, cache);
}

Params sgd_step(Params p, const std::vector<Gradient>& gradients,
                double epsilon, double l2) {
  if (gradients.empty()) {
    throw std::invalid_argument("sgd_step needs at least one gradient");
  }
  for (const Gradient& g : gradients) {
    if (g.widths != p.widths) {
      throw std::invalid_argument("gradient shape does not match parameters");
    }
  }
  const double scale = 1.0 / static_cast<double>(gradients.size());
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    Params::Layer& layer = p.layers[k];
    std::vector<double> mean_w(layer.w.size(), 0.0);
    std::vector<double> mean_b(layer.b.size(), 0.0);
    for (const Gradient& g : gradients) {
      for (std::size_t i = 0; i < mean_w.size(); ++i) mean_w[i] += g.layers[k].w[i];
      for (std::size_t i = 0; i < mean_b.size(); ++i) mean_b[i] += g.layers[k].b[i];
    }
    for (std::size_t i = 0; i < mean_w.size(); ++i) {
      double m = mean_w[i] * scale;
      if (l2 > 0) m += 2.0 * l2 * layer.w[i];
      layer.w[i] -= epsilon * m;
    }
    for (std::size_t i = 0; i < mean_b.size(); ++i) {
      double m = mean_b[i] * scale;
      if (l2 > 0) m += 2.0 * l2 * layer.b[i];
      layer.b[i] -= epsilon * m;
    }
  }
  return p;
}

namespace {

void write_hex_line(std::ofstream& out, std::span<const double> values) {
  char buf[48];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%a", values[i]);
    if (i > 0) out << ' ';
    out << buf;
  }
  out << '\n';
}

double parse_double(const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) {
    throw std::runtime_error("model file: bad float literal '" + tok + "'");
  }
  if (!std::isfinite(v)) {
    throw std::runtime_error("model file: non-finite value '" + tok + "'");
  }
  return v;
}

}  // namespace

void save_params(const Params& p, const std::filesystem::path& path) {
  check_shapes(p);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "idpnet 1\n";
  for (std::size_t i = 0; i < p.widths.size(); ++i) {
    if (i > 0) out << ' ';
    out << p.widths[i];
  }
  out << '\n';
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    const std::size_t cols = static_cast<std::size_t>(p.widths[k]);
    const std::size_t rows = static_cast<std::size_t>(p.widths[k + 1]);
    out << "W " << (k + 1) << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      write_hex_line(out, std::span<const double>(p.layers[k].w).subspan(r * cols, cols));
    }
    out << "b " << (k + 1) << '\n';
    write_hex_line(out, p.layers[k].b);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Params load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "idpnet 1") {
    throw std::runtime_error("model file: unsupported header");
  }
  if (!std::getline(in, line)) {
    throw std::runtime_error("model file: missing widths");
  }
  Params p;
  {
    std::istringstream widths(line);
    std::int64_t w;
    while (widths >> w) {
      if (w < 1) throw std::runtime_error("model file: widths must be >= 1");
      p.widths.push_back(static_cast<std::int32_t>(w));
    }
  }
  if (p.widths.size() < 2) {
    throw std::runtime_error("model file: needs at least two widths");
  }
  p.layers.resize(p.widths.size() - 1);
  std::string tok;
  auto expect = [&](const std::string& want) {
    if (!(in >> tok) || tok != want) {
      throw std::runtime_error("model file: expected '" + want + "'");
    }
  };
  auto read_values = [&](std::vector<double>& dst, std::size_t n) {
    dst.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(in >> tok)) throw std::runtime_error("model file: truncated");
      dst[i] = parse_double(tok);
    }
  };
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    const std::size_t cols = static_cast<std::size_t>(p.widths[k]);
    const std::size_t rows = static_cast<std::size_t>(p.widths[k + 1]);
    expect("W");
    expect(std::to_string(k + 1));
    read_values(p.layers[k].w, rows * cols);
    expect("b");
    expect(std::to_string(k + 1));
    read_values(p.layers[k].b, rows);
  }
  return p;
}

}  // namespace idp
