#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "debunkd/propagation.hpp"

namespace debunkd {

// Masked environment state: [r^I; d^I; r^R; d^R; e], length 5n. r^I/r^R are
// Infected/Recovered indicators, d^I/d^R count posts made by each user since
// the beginning of mitigation, e is the follower count.
struct Observation {
  int n = 0;
  std::vector<double> s;

  double r_infected(int i) const { return s[i]; }
  double d_fake(int i) const { return s[n + i]; }
  double r_recovered(int i) const { return s[2 * n + i]; }
  double d_true(int i) const { return s[3 * n + i]; }
  double followers(int i) const { return s[4 * n + i]; }
};

// Unmasked state [P^I; r^I; d^I; P^R; r^R; d^R; iota; e], length 8n.
// Debug output only; never fed to the policy or the discriminator.
struct FullState {
  int n = 0;
  std::vector<double> s_e;
};

// Discounted average of the previous (observation, action one-hot) pairs of
// the episode, length 6n. Zero at the first stage.
struct AugmentedState {
  std::vector<double> v;
};

struct MitigationConfig {
  double budget = 20.0;
  double stage_length = 1.0;  // w
  double t_start = 5.0;
  double t_tail = 5.0;        // post-campaign window before the reward is gauged
  double psi = 0.9;           // augmented-state discount
  int initial_spreaders = 20;
  bool reuse_debunkers = false;
  bool terminal_sampled = false;  // Bernoulli-sample the terminal infected set
                                  // instead of using the expected count
  PropagationParams prop;
};

struct TraceStep {
  Observation s;
  AugmentedState s_prime;
  std::vector<char> mask;  // action mask in effect when the action was chosen
  int action = -1;
};

struct EpisodeTrace {
  std::vector<TraceStep> steps;
  double reward = 0.0;
};

// Direct summation of the discounted-history average:
//   s'_{i+1} = (1/i) * sum_{m=1..i} psi^{i-m} [s_m; a_m].
// Reference route; the incremental accumulator below is the hot path.
AugmentedState augment(const std::vector<std::pair<Observation, int>>& history,
                       double psi, int n);

class AugmentAccumulator {
 public:
  explicit AugmentAccumulator(int n) : n_(n), weighted_sum_(6 * n, 0.0) {}

  void push(const Observation& s, int action, double psi);
  AugmentedState current() const;
  int count() const { return count_; }

 private:
  int n_;
  int count_ = 0;
  std::vector<double> weighted_sum_;  // sum of psi^{i-m} [s_m; a_m]
};

// Smoothed episodic reward -log((C + 1) / (n + 1)) for an expected infected
// count C; 0 at full infection, log(n + 1) at none.
double reward_from_infected_count(double c, int n);

// Multi-stage debunker-selection environment. Construction seeds the fake
// spreaders and advances propagation to t_start.
class MitigationEnv {
 public:
  MitigationEnv(const SocialGraph& graph, const MitigationConfig& config,
                std::uint64_t seed);

  Observation observe() const;
  FullState full_state() const;
  AugmentedState augmented() const { return aug_.current(); }

  // mask_i = (c_i <= remaining budget) and (reuse allowed or i unused).
  std::vector<char> action_mask() const;
  bool done() const { return done_; }
  double remaining_budget() const { return remaining_; }
  double spent() const { return spent_; }
  double clock() const { return sim_.clock(); }
  int stage() const { return aug_.count(); }

  struct StepResult {
    Observation obs;
    double remaining_budget;
    bool done;
  };

  // Deploy the chosen debunker, charge its cost, advance one stage. The
  // action must be unmasked.
  StepResult step(int action);

  // Advance the post-campaign window; callable once, after done().
  void finish();
  bool finished() const { return finished_; }

  // Expected infected count C = sum_i p_i with p_i = 1 for Infected users,
  // 0 for Recovered, and the infection probability otherwise. Only valid
  // after finish().
  double expected_infected();
  double episodic_reward();

  const MitigationConfig& config() const { return cfg_; }
  SimState& sim() { return sim_; }
  const SimState& sim() const { return sim_; }

 private:
  bool any_affordable() const;

  const SocialGraph* graph_;
  MitigationConfig cfg_;
  SimState sim_;
  RngStream terminal_rng_;
  AugmentAccumulator aug_;
  std::vector<long long> base_fake_, base_true_;
  std::vector<char> used_;
  double remaining_;
  double spent_ = 0.0;
  double terminal_infected_ = 0.0;
  bool done_ = false;
  bool finished_ = false;
};

void write_trace_csv(const std::string& path, const std::vector<EpisodeTrace>& episodes,
                     const SocialGraph& graph, double budget);

}  // namespace debunkd
