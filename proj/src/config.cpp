#include "debunkd/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace debunkd {

SocialGraph build_network(const NetSpec& spec) {
  SocialGraph g;
  if (spec.kind == "scale_free") {
    g = generate_scale_free(spec.n, spec.alpha, spec.beta, spec.gamma, spec.net_seed,
                            spec.delta_in, spec.delta_out);
  } else if (spec.kind == "edge_list") {
    g = load_edge_list(spec.edge_list, spec.undirected);
  } else {
    throw std::invalid_argument("build_network: unknown network kind '" + spec.kind + "'");
  }
  if (spec.ego_center >= 0) g = ego_subgraph(g, spec.ego_center, spec.ego_radius);
  return g;
}

PolicySpec policy_from_string(const std::string& name) {
  PolicySpec p;
  p.name = name;
  if (name == "rnd" || name == "max_inf" || name == "max_def") {
    p.heuristic = heuristic_from_string(name);
    return p;
  }
  p.learned = true;
  if (name == "gasil") {
    p.use_augmented_state = false;
    p.use_negative_samples = false;
  } else if (name == "ngasil") {  // negative samples, no augmented state
    p.use_augmented_state = false;
    p.use_negative_samples = true;
  } else if (name == "agasil") {  // augmented state, no negative samples
    p.use_augmented_state = true;
    p.use_negative_samples = false;
  } else if (name == "nagasil") {
    p.use_augmented_state = true;
    p.use_negative_samples = true;
  } else {
    throw std::invalid_argument("unknown policy '" + name + "'");
  }
  return p;
}

const std::map<std::string, std::string>& ExperimentConfig::defaults() {
  static const std::map<std::string, std::string> kDefaults = {
      // network
      {"network", "scale_free"},
      {"n", "1250"},
      {"alpha", "0.05"},
      {"beta", "0.8"},
      {"gamma", "0.15"},
      {"delta_in", "0.2"},
      {"delta_out", "0.0"},
      {"net_seed", "1"},
      {"edge_list", ""},
      {"undirected", "true"},
      {"ego_center", "-1"},
      {"ego_radius", "2"},
      // propagation
      {"delta", "1.0"},
      {"omega", "1.0"},
      {"dt", "0.1"},
      {"xi_min", "0.5"},
      {"xi_max", "1.5"},
      {"intensity_file", ""},
      // mitigation
      {"spreaders", "20"},
      {"t_start", "5.0"},
      {"stage_length", "1.0"},
      {"budget", "20.0"},
      {"t_tail", "5.0"},
      {"reuse_debunkers", "false"},
      {"terminal_sampled", "false"},
      {"psi", "0.9"},
      // training
      {"policy", "nagasil"},
      {"policies", ""},
      {"episodes", "1000"},
      {"lambda", "0.01"},
      {"lambda1", "0.1"},
      {"gamma_r", "0.99"},
      {"good_capacity", "20"},
      {"bad_fraction", "0.1"},
      {"bad_cap", "100"},
      {"batch_good", "64"},
      {"batch_bad", "64"},
      {"disc_updates", "1"},
      {"policy_updates", "1"},
      {"hidden", "64,64"},
      {"lr_policy", "0.001"},
      {"lr_disc", "0.001"},
      {"lr_neg", "0.001"},
      {"checkpoint_every", "0"},
      {"checkpoint", ""},
      // harness
      {"seeds", "1,2,3,4,5"},
      {"out", "out"},
      {"sim_time", "10.0"},
      {"eval_episodes", "100"},
  };
  return kDefaults;
}

ExperimentConfig::ExperimentConfig() : values_(defaults()) {}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      cfg.set_pair(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("config: line " + std::to_string(line_no) + " of " + path +
                               ": " + e.what());
    }
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!defaults().count(key))
    throw std::invalid_argument("unknown config key '" + key + "'");
  values_[key] = value;
}

void ExperimentConfig::set_pair(const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got '" + key_equals_value + "'");
  set(trim(key_equals_value.substr(0, eq)), trim(key_equals_value.substr(eq + 1)));
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("unknown config key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': invalid number '" + v + "'");
  }
}

int ExperimentConfig::get_int(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': invalid integer '" + v + "'");
  }
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    const unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(u);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': invalid integer '" + v + "'");
  }
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': invalid boolean '" + v + "'");
}

std::vector<std::string> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream ss(get(key));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a over sorted "key=value" pairs; std::map iteration is ordered, so
  // the hash is independent of insertion order.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](const std::string& s) {
    for (const char ch : s) {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : values_) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

NetSpec ExperimentConfig::net() const {
  NetSpec spec;
  spec.kind = get("network");
  spec.n = get_int("n");
  spec.alpha = get_double("alpha");
  spec.beta = get_double("beta");
  spec.gamma = get_double("gamma");
  spec.delta_in = get_double("delta_in");
  spec.delta_out = get_double("delta_out");
  spec.net_seed = get_u64("net_seed");
  spec.edge_list = get("edge_list");
  spec.undirected = get_bool("undirected");
  spec.ego_center = get_int("ego_center");
  spec.ego_radius = get_int("ego_radius");
  return spec;
}

MitigationConfig ExperimentConfig::mitigation() const {
  MitigationConfig m;
  m.budget = get_double("budget");
  m.stage_length = get_double("stage_length");
  m.t_start = get_double("t_start");
  m.t_tail = get_double("t_tail");
  m.psi = get_double("psi");
  m.initial_spreaders = get_int("spreaders");
  m.reuse_debunkers = get_bool("reuse_debunkers");
  m.terminal_sampled = get_bool("terminal_sampled");
  m.prop.delta = get_double("delta");
  m.prop.omega = get_double("omega");
  m.prop.dt = get_double("dt");
  const std::string intensity_file = get("intensity_file");
  if (!intensity_file.empty())
    m.prop.intensity = IntensityDistribution::from_file(intensity_file);
  else
    m.prop.intensity = IntensityDistribution(get_double("xi_min"), get_double("xi_max"));
  return m;
}

TrainConfig ExperimentConfig::train_config(const PolicySpec& policy) const {
  TrainConfig t;
  t.iterations = get_int("episodes");
  t.batch_good = get_int("batch_good");
  t.batch_bad = get_int("batch_bad");
  t.disc_updates = get_int("disc_updates");
  t.policy_updates = get_int("policy_updates");
  t.gamma_r = get_double("gamma_r");
  t.lambda = get_double("lambda");
  t.lambda1 = get_double("lambda1");
  t.use_augmented_state = policy.use_augmented_state;
  t.use_negative_samples = policy.use_negative_samples;
  t.good_capacity = get_int("good_capacity");
  t.bad_fraction = get_double("bad_fraction");
  t.bad_cap = get_int("bad_cap");
  t.hidden.clear();
  for (const auto& tok : get_list("hidden")) t.hidden.push_back(std::stoi(tok));
  if (t.hidden.empty()) throw std::invalid_argument("config key 'hidden': empty");
  t.lr_policy = get_double("lr_policy");
  t.lr_disc = get_double("lr_disc");
  t.lr_neg = get_double("lr_neg");
  t.checkpoint_every = get_int("checkpoint_every");
  return t;
}

PolicySpec ExperimentConfig::policy() const { return policy_from_string(get("policy")); }

std::vector<PolicySpec> ExperimentConfig::policies() const {
  std::vector<PolicySpec> out;
  for (const auto& name : get_list("policies")) out.push_back(policy_from_string(name));
  if (out.empty()) out.push_back(policy());
  return out;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& tok : get_list("seeds")) {
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("config key 'seeds': invalid integer '" + tok + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("config key 'seeds': empty");
  return out;
}

}  // namespace debunkd
