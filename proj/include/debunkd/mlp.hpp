#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "debunkd/rng.hpp"

namespace debunkd {

enum class Head { MaskedSoftmax, Softmax, Sigmoid };

std::string head_name(Head h);
Head head_from_name(const std::string& name);

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> v;  // row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

// Feedforward network with tanh hidden layers and one of three heads. The
// sigmoid head requires an output width of 1.
struct Mlp {
  std::vector<int> dims;  // {input, hidden..., output}
  Head head = Head::Softmax;
  std::vector<Matrix> weights;          // weights[l]: dims[l+1] x dims[l]
  std::vector<std::vector<double>> biases;

  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }
  int layers() const { return static_cast<int>(weights.size()); }
  std::size_t parameter_count() const;
};

Mlp make_mlp(std::vector<int> dims, Head head);  // zero-initialized
void init_glorot(Mlp& net, RngStream& rng);      // U[-r, r], r = sqrt(6/(fan_in+fan_out))

struct ForwardCache {
  // acts[0] is the input; acts[l] the post-tanh activation of hidden layer l;
  // acts.back() the raw logits (pre-head).
  std::vector<std::vector<double>> acts;
  std::vector<double> out;  // head output
};

// Forward pass. `mask` applies only to the MaskedSoftmax head: masked entries
// are exactly 0 and the rest renormalize; at least one entry must be unmasked.
std::vector<double> forward(const Mlp& net, std::span<const double> input,
                            const std::vector<char>* mask = nullptr,
                            ForwardCache* cache = nullptr);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  void zero();
  void scale(double a);
  void add_scaled(const Gradients& other, double a);
};

Gradients make_gradients(const Mlp& net);

// Accumulate parameter gradients into `out`, given dLoss/dlogits at the
// cached forward point.
void backward_from_logits(const Mlp& net, const ForwardCache& cache,
                          std::span<const double> dlogits, Gradients& out);

// Chain dLoss/dprobs through a (masked) softmax:
//   dlogit_j = p_j * (g_j - sum_k g_k p_k), restricted to unmasked entries.
std::vector<double> softmax_backward(std::span<const double> probs,
                                     std::span<const double> dprobs,
                                     const std::vector<char>* mask);

// Flat parameter indexing (layer 0 weights row-major, layer 0 biases,
// layer 1 weights, ...). Used by the optimizer, checkpoints and the
// finite-difference checker.
double get_param(const Mlp& net, std::size_t idx);
void set_param(Mlp& net, std::size_t idx, double value);
double get_grad(const Gradients& g, std::size_t idx);

enum class Direction { Ascend, Descend };

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with a direction switch. Every step verifies parameters stay finite.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, AdamParams p);

  void step(Mlp& net, const Gradients& g, Direction dir);
  long long steps() const { return t_; }
  const AdamParams& params() const { return p_; }

 private:
  AdamParams p_;
  long long t_ = 0;
  Gradients m_, v_;
};

// Central finite differences against an analytic gradient. Relative error is
// |bp - fd| / max(1e-4, |bp|, |fd|); parameters are subsampled (deterministic
// under `seed`) above `max_params`. Returns the maximum relative error.
double gradient_check(Mlp& net, const std::function<double(const Mlp&)>& loss,
                      const Gradients& analytic, double epsilon,
                      std::size_t max_params = 10000, std::uint64_t seed = 0);

// Checkpoints: versioned text header, then one "name rows cols" line plus one
// row-major value line per tensor. Values round-trip exactly.
void save_params(const Mlp& net, const std::string& name, std::ostream& out);
void save_params_file(const Mlp& net, const std::string& name, const std::string& path);
void load_params(Mlp& net, const std::string& expected_name, std::istream& in);
void load_params_file(Mlp& net, const std::string& expected_name, const std::string& path);
std::string params_to_string(const Mlp& net, const std::string& name);

// Policy head over n users: input [s; s'] (11n), masked softmax output.
std::vector<double> policy_forward(const Mlp& policy, std::span<const double> s,
                                   std::span<const double> s_prime,
                                   const std::vector<char>& mask,
                                   ForwardCache* cache = nullptr);

// Discriminator D(s, s', a) in (0, 1): input [s; s'; a one-hot] (12n).
double discriminator_forward(const Mlp& disc, std::span<const double> s,
                             std::span<const double> s_prime, int action,
                             ForwardCache* cache = nullptr);

}  // namespace debunkd
