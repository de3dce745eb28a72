#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace idp {

// Hyper-parameters of the piece-wise linear approximator. widths holds the
// full chain l_0 .. l_{m+1}: input width, m hidden widths, output width.
struct NetSpec {
  std::vector<std::int32_t> widths;
  double epsilon = 0.001;   // learning rate
  double beta = 10.0;       // balance multiplier on the positive BCE term
  std::int32_t batch_size = 10;
  std::uint64_t seed = 0;
  double l2 = 0.0;          // optional ridge penalty, 0 disables

  int hidden_layers() const { return static_cast<int>(widths.size()) - 2; }
  void validate() const;
};

// Weight matrices are row-major with rows indexing outputs: layer k maps
// l_{k-1} inputs to l_k outputs via W_k x + b_k.
struct Params {
  struct Layer {
    std::vector<double> w;
    std::vector<double> b;

    bool operator==(const Layer&) const = default;
  };
  std::vector<std::int32_t> widths;
  std::vector<Layer> layers;

  std::size_t count() const;  // total number of scalar parameters
  bool operator==(const Params&) const = default;
};

// Gradients share the parameter layout.
using Gradient = Params;

// Deterministic initialization: weights uniform on [-s, s] with
// s = sqrt(6 / (fan_in + fan_out)), biases zero. Draws come from the
// counter-based mixer seeded with spec.seed, consumed layer by layer, each
// weight matrix row-major; biases consume no draws. Two runs with the same
// spec produce bit-identical parameters.
Params init_params(const NetSpec& spec);

void relu_inplace(std::span<double> x);
double sigmoid(double x);

// Reusable buffers for the forward pass: act[0] is the input copy, act[k]
// the post-ReLU activation of hidden layer k, pre[k-1] its pre-activation.
struct ForwardCache {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> pre;
  std::vector<double> logits;
};

void forward(const Params& p, std::span<const double> x, ForwardCache& cache);
std::vector<double> forward(const Params& p, std::span<const double> x);

enum class Loss {
  kEuclid,  // ||y - f(x)||
  kBce,     // sum (1-y) softplus(t) + beta y softplus(-t), in logit space
};

double loss_euclid(std::span<const double> logits, std::span<const double> y);
double loss_bce(std::span<const double> logits, std::span<const double> labels,
                double beta);

// Exact gradient of the chosen loss with respect to every weight and bias.
// The ReLU subgradient at 0 is taken as 0. Overwrites grad (reshaping it if
// needed) and returns the loss value.
double backward(const Params& p, std::span<const double> x,
                std::span<const double> target, Loss loss, double beta,
                Gradient& grad, ForwardCache& cache);
double backward(const Params& p, std::span<const double> x,
                std::span<const double> target, Loss loss, double beta,
                Gradient& grad);

// p' = p - epsilon * mean(gradients), entry-wise, summed in list order.
// A positive l2 adds the ridge term 2*l2*p to the mean gradient.
Params sgd_step(Params p, const std::vector<Gradient>& gradients,
                double epsilon, double l2 = 0.0);

// Text model format, hexadecimal floats for bit-exact round trips:
//   idpnet 1
//   <widths space-separated>
//   W 1
//   <l_1 rows of l_0 hex floats>
//   b 1
//   <l_1 hex floats>
//   ... per layer
void save_params(const Params& p, const std::filesystem::path& path);
Params load_params(const std::filesystem::path& path);

}  // namespace idp
