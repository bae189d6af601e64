#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "debunkd/baselines.hpp"
#include "debunkd/env.hpp"
#include "debunkd/graph.hpp"
#include "debunkd/trainer.hpp"

namespace debunkd {

// How a network is obtained: generated, or loaded from an edge list with an
// optional ego-subgraph extraction.
struct NetSpec {
  std::string kind = "scale_free";  // scale_free | edge_list
  int n = 1250;
  double alpha = 0.05, beta = 0.8, gamma = 0.15;
  double delta_in = 0.2, delta_out = 0.0;
  std::uint64_t net_seed = 1;
  std::string edge_list;
  bool undirected = true;
  int ego_center = -1;  // < 0 disables extraction
  int ego_radius = 2;
};

SocialGraph build_network(const NetSpec& spec);

// Selection method: a heuristic, or the adversarial self-imitation trainer
// with the ablation flags of its named preset.
struct PolicySpec {
  std::string name;
  bool learned = false;
  HeuristicKind heuristic = HeuristicKind::Rnd;
  bool use_augmented_state = false;
  bool use_negative_samples = false;
};

PolicySpec policy_from_string(const std::string& name);

// Flat key=value experiment configuration ('#' comments, no nesting). Every
// key has a default; unknown keys are rejected by name.
class ExperimentConfig {
 public:
  ExperimentConfig();  // defaults only

  static ExperimentConfig from_file(const std::string& path);
  static const std::map<std::string, std::string>& defaults();

  void set(const std::string& key, const std::string& value);
  void set_pair(const std::string& key_equals_value);  // "key=value"
  const std::string& get(const std::string& key) const;

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  // Order-independent content hash.
  std::uint64_t hash() const;

  NetSpec net() const;
  MitigationConfig mitigation() const;
  TrainConfig train_config(const PolicySpec& policy) const;
  PolicySpec policy() const;
  std::vector<PolicySpec> policies() const;  // `policies` list, or [policy]
  std::vector<std::uint64_t> seeds() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace debunkd
