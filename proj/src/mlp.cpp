#include "debunkd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace debunkd {

std::string head_name(Head h) {
  switch (h) {
    case Head::MaskedSoftmax: return "masked_softmax";
    case Head::Softmax: return "softmax";
    case Head::Sigmoid: return "sigmoid";
  }
  return "?";
}

Head head_from_name(const std::string& name) {
  if (name == "masked_softmax") return Head::MaskedSoftmax;
  if (name == "softmax") return Head::Softmax;
  if (name == "sigmoid") return Head::Sigmoid;
  throw std::invalid_argument("unknown head: " + name);
}

std::size_t Mlp::parameter_count() const {
  std::size_t c = 0;
  for (int l = 0; l < layers(); ++l)
    c += weights[l].v.size() + biases[l].size();
  return c;
}

Mlp make_mlp(std::vector<int> dims, Head head) {
  if (dims.size() < 2) throw std::invalid_argument("make_mlp: need at least two dims");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("make_mlp: dims must be positive");
  if (head == Head::Sigmoid && dims.back() != 1)
    throw std::invalid_argument("make_mlp: sigmoid head requires output width 1");
  Mlp net;
  net.dims = std::move(dims);
  net.head = head;
  for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
    net.weights.emplace_back(net.dims[l + 1], net.dims[l]);
    net.biases.emplace_back(net.dims[l + 1], 0.0);
  }
  return net;
}

void init_glorot(Mlp& net, RngStream& rng) {
  for (int l = 0; l < net.layers(); ++l) {
    const double r = std::sqrt(6.0 / (net.dims[l] + net.dims[l + 1]));
    for (double& w : net.weights[l].v) w = rng.uniform(-r, r);
    for (double& b : net.biases[l]) b = 0.0;
  }
}

namespace {

void affine(const Matrix& w, const std::vector<double>& b,
            std::span<const double> in, std::vector<double>& out) {
  out.assign(w.rows, 0.0);
  for (int r = 0; r < w.rows; ++r) {
    double acc = b[r];
    const double* row = &w.v[static_cast<std::size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) acc += row[c] * in[c];
    out[r] = acc;
  }
}

std::vector<double> softmax(std::span<const double> logits, const std::vector<char>* mask) {
  std::vector<double> p(logits.size(), 0.0);
  double zmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (!mask || (*mask)[i]) zmax = std::max(zmax, logits[i]);
  if (zmax == -std::numeric_limits<double>::infinity())
    throw std::invalid_argument("softmax: all actions masked");
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    p[i] = std::exp(logits[i] - zmax);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<double> forward(const Mlp& net, std::span<const double> input,
                            const std::vector<char>* mask, ForwardCache* cache) {
  if (static_cast<int>(input.size()) != net.input_dim())
    throw std::invalid_argument("forward: input size mismatch");
  if (net.head == Head::MaskedSoftmax) {
    if (!mask || static_cast<int>(mask->size()) != net.output_dim())
      throw std::invalid_argument("forward: masked softmax needs a mask of output size");
  }

  std::vector<std::vector<double>> acts;
  acts.emplace_back(input.begin(), input.end());
  std::vector<double> cur(input.begin(), input.end());
  for (int l = 0; l < net.layers(); ++l) {
    std::vector<double> next;
    affine(net.weights[l], net.biases[l], cur, next);
    if (l + 1 < net.layers())
      for (double& v : next) v = std::tanh(v);
    cur = std::move(next);
    acts.push_back(cur);
  }

  std::vector<double> out;
  switch (net.head) {
    case Head::MaskedSoftmax: out = softmax(cur, mask); break;
    case Head::Softmax: out = softmax(cur, nullptr); break;
    case Head::Sigmoid: out = {1.0 / (1.0 + std::exp(-cur[0]))}; break;
  }
  if (cache) {
    cache->acts = std::move(acts);
    cache->out = out;
  }
  return out;
}

void Gradients::zero() {
  for (auto& w : weights) std::fill(w.v.begin(), w.v.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void Gradients::scale(double a) {
  for (auto& w : weights)
    for (double& v : w.v) v *= a;
  for (auto& b : biases)
    for (double& v : b) v *= a;
}

void Gradients::add_scaled(const Gradients& other, double a) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].v.size(); ++i)
      weights[l].v[i] += a * other.weights[l].v[i];
    for (std::size_t i = 0; i < biases[l].size(); ++i)
      biases[l][i] += a * other.biases[l][i];
  }
}

Gradients make_gradients(const Mlp& net) {
  Gradients g;
  for (int l = 0; l < net.layers(); ++l) {
    g.weights.emplace_back(net.weights[l].rows, net.weights[l].cols);
    g.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  return g;
}

void backward_from_logits(const Mlp& net, const ForwardCache& cache,
                          std::span<const double> dlogits, Gradients& out) {
  if (static_cast<int>(dlogits.size()) != net.output_dim())
    throw std::invalid_argument("backward_from_logits: dlogits size mismatch");
  std::vector<double> delta(dlogits.begin(), dlogits.end());
  for (int l = net.layers() - 1; l >= 0; --l) {
    const std::vector<double>& below = cache.acts[l];
    Matrix& gw = out.weights[l];
    for (int r = 0; r < gw.rows; ++r) {
      const double d = delta[r];
      out.biases[l][r] += d;
      double* row = &gw.v[static_cast<std::size_t>(r) * gw.cols];
      for (int c = 0; c < gw.cols; ++c) row[c] += d * below[c];
    }
    if (l == 0) break;
    std::vector<double> prev(net.dims[l], 0.0);
    const Matrix& w = net.weights[l];
    for (int r = 0; r < w.rows; ++r) {
      const double d = delta[r];
      const double* row = &w.v[static_cast<std::size_t>(r) * w.cols];
      for (int c = 0; c < w.cols; ++c) prev[c] += d * row[c];
    }
    // chain through tanh: below is the post-activation value
    for (int c = 0; c < net.dims[l]; ++c) prev[c] *= 1.0 - below[c] * below[c];
    delta = std::move(prev);
  }
}

std::vector<double> softmax_backward(std::span<const double> probs,
                                     std::span<const double> dprobs,
                                     const std::vector<char>* mask) {
  double dot = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    dot += dprobs[i] * probs[i];
  }
  std::vector<double> dlogits(probs.size(), 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    dlogits[i] = probs[i] * (dprobs[i] - dot);
  }
  return dlogits;
}

namespace {

// Locate flat parameter index `idx` as (layer, weight-or-bias, offset).
template <typename Weights, typename Biases>
double* locate_param(Weights& weights, Biases& biases, std::size_t idx) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (idx < weights[l].v.size()) return &weights[l].v[idx];
    idx -= weights[l].v.size();
    if (idx < biases[l].size()) return &biases[l][idx];
    idx -= biases[l].size();
  }
  throw std::out_of_range("parameter index out of range");
}

}  // namespace

double get_param(const Mlp& net, std::size_t idx) {
  return *locate_param(const_cast<Mlp&>(net).weights, const_cast<Mlp&>(net).biases, idx);
}

void set_param(Mlp& net, std::size_t idx, double value) {
  *locate_param(net.weights, net.biases, idx) = value;
}

double get_grad(const Gradients& g, std::size_t idx) {
  return *locate_param(const_cast<Gradients&>(g).weights, const_cast<Gradients&>(g).biases,
                       idx);
}

Adam::Adam(const Mlp& net, AdamParams p) : p_(p), m_(make_gradients(net)), v_(make_gradients(net)) {}

void Adam::step(Mlp& net, const Gradients& g, Direction dir) {
  if (m_.weights.size() != net.weights.size())
    throw std::invalid_argument("Adam::step: shape mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(p_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(p_.beta2, static_cast<double>(t_));
  const double sign = dir == Direction::Ascend ? 1.0 : -1.0;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (g.weights[l].v.size() != net.weights[l].v.size() ||
        g.biases[l].size() != net.biases[l].size())
      throw std::invalid_argument("Adam::step: shape mismatch");
    auto update = [&](double& p, double& m, double& v, double grad) {
      m = p_.beta1 * m + (1.0 - p_.beta1) * grad;
      v = p_.beta2 * v + (1.0 - p_.beta2) * grad * grad;
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      p += sign * p_.lr * mhat / (std::sqrt(vhat) + p_.eps);
      if (!std::isfinite(p)) throw std::runtime_error("Adam::step: non-finite parameter");
    };
    for (std::size_t i = 0; i < net.weights[l].v.size(); ++i)
      update(net.weights[l].v[i], m_.weights[l].v[i], v_.weights[l].v[i], g.weights[l].v[i]);
    for (std::size_t i = 0; i < net.biases[l].size(); ++i)
      update(net.biases[l][i], m_.biases[l][i], v_.biases[l][i], g.biases[l][i]);
  }
}

double gradient_check(Mlp& net, const std::function<double(const Mlp&)>& loss,
                      const Gradients& analytic, double epsilon,
                      std::size_t max_params, std::uint64_t seed) {
  if (epsilon <= 0.0) throw std::invalid_argument("gradient_check: epsilon must be positive");
  const std::size_t count = net.parameter_count();
  std::vector<std::size_t> indices;
  if (count <= max_params) {
    indices.resize(count);
    for (std::size_t i = 0; i < count; ++i) indices[i] = i;
  } else {
    RngStream rng(seed, Stream::Seeding);
    for (int i : rng.sample_distinct(static_cast<int>(max_params), static_cast<int>(count)))
      indices.push_back(static_cast<std::size_t>(i));
  }
  double worst = 0.0;
  for (std::size_t idx : indices) {
    const double orig = get_param(net, idx);
    set_param(net, idx, orig + epsilon);
    const double up = loss(net);
    set_param(net, idx, orig - epsilon);
    const double down = loss(net);
    set_param(net, idx, orig);
    const double fd = (up - down) / (2.0 * epsilon);
    const double bp = get_grad(analytic, idx);
    const double rel = std::abs(bp - fd) / std::max({1e-4, std::abs(bp), std::abs(fd)});
    worst = std::max(worst, rel);
  }
  return worst;
}

void save_params(const Mlp& net, const std::string& name, std::ostream& out) {
  out << "debunkd-params v1\n";
  out << name << " layers=" << net.layers() << " head=" << head_name(net.head) << " dims=";
  for (std::size_t i = 0; i < net.dims.size(); ++i)
    out << (i ? "," : "") << net.dims[i];
  out << '\n';
  char buf[40];
  auto write_row = [&](const std::string& tag, int rows, int cols,
                       const std::vector<double>& vals) {
    out << tag << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  };
  for (int l = 0; l < net.layers(); ++l) {
    write_row("W" + std::to_string(l), net.weights[l].rows, net.weights[l].cols,
              net.weights[l].v);
    write_row("b" + std::to_string(l), 1, static_cast<int>(net.biases[l].size()),
              net.biases[l]);
  }
}

void save_params_file(const Mlp& net, const std::string& name, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_params_file: cannot write " + path);
  save_params(net, name, out);
  if (!out) throw std::runtime_error("save_params_file: write failed " + path);
}

std::string params_to_string(const Mlp& net, const std::string& name) {
  std::ostringstream ss;
  save_params(net, name, ss);
  return ss.str();
}

void load_params(Mlp& net, const std::string& expected_name, std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != "debunkd-params v1")
    throw std::runtime_error("load_params: bad or missing version header");
  std::string meta;
  if (!std::getline(in, meta)) throw std::runtime_error("load_params: missing metadata");
  std::istringstream ms(meta);
  std::string name, layers_kv, head_kv, dims_kv;
  ms >> name >> layers_kv >> head_kv >> dims_kv;
  if (name != expected_name)
    throw std::runtime_error("load_params: checkpoint is '" + name + "', expected '" +
                             expected_name + "'");
  auto value_of = [](const std::string& kv, const std::string& key) {
    if (kv.rfind(key + "=", 0) != 0)
      throw std::runtime_error("load_params: malformed metadata field " + kv);
    return kv.substr(key.size() + 1);
  };
  const int layers = std::stoi(value_of(layers_kv, "layers"));
  const Head head = head_from_name(value_of(head_kv, "head"));
  std::vector<int> dims;
  {
    std::istringstream ds(value_of(dims_kv, "dims"));
    std::string tok;
    while (std::getline(ds, tok, ',')) dims.push_back(std::stoi(tok));
  }
  if (head != net.head || dims != net.dims || layers != net.layers())
    throw std::runtime_error("load_params: architecture mismatch");

  for (int l = 0; l < layers; ++l) {
    auto read_tensor = [&](const std::string& tag, int rows, int cols,
                           std::vector<double>& vals) {
      std::string got;
      int r = 0, c = 0;
      if (!(in >> got >> r >> c) || got != tag || r != rows || c != cols)
        throw std::runtime_error("load_params: unexpected tensor " + got);
      for (auto& v : vals)
        if (!(in >> v)) throw std::runtime_error("load_params: truncated values for " + tag);
    };
    read_tensor("W" + std::to_string(l), net.weights[l].rows, net.weights[l].cols,
                net.weights[l].v);
    read_tensor("b" + std::to_string(l), 1, static_cast<int>(net.biases[l].size()),
                net.biases[l]);
  }
}

void load_params_file(Mlp& net, const std::string& expected_name, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_params_file: cannot open " + path);
  load_params(net, expected_name, in);
}

std::vector<double> policy_forward(const Mlp& policy, std::span<const double> s,
                                   std::span<const double> s_prime,
                                   const std::vector<char>& mask, ForwardCache* cache) {
  std::vector<double> input;
  input.reserve(s.size() + s_prime.size());
  input.insert(input.end(), s.begin(), s.end());
  input.insert(input.end(), s_prime.begin(), s_prime.end());
  return forward(policy, input, &mask, cache);
}

double discriminator_forward(const Mlp& disc, std::span<const double> s,
                             std::span<const double> s_prime, int action,
                             ForwardCache* cache) {
  const std::size_t prefix = s.size() + s_prime.size();
  if (static_cast<std::size_t>(disc.input_dim()) <= prefix)
    throw std::invalid_argument("discriminator_forward: input width too small");
  const std::size_t onehot = disc.input_dim() - prefix;
  if (action < 0 || static_cast<std::size_t>(action) >= onehot)
    throw std::invalid_argument("discriminator_forward: action out of range");
  std::vector<double> input;
  input.reserve(disc.input_dim());
  input.insert(input.end(), s.begin(), s.end());
  input.insert(input.end(), s_prime.begin(), s_prime.end());
  input.resize(disc.input_dim(), 0.0);
  input[prefix + action] = 1.0;
  return forward(disc, input, nullptr, cache)[0];
}

}  // namespace debunkd
