#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "debunkd/env.hpp"
#include "debunkd/memory.hpp"
#include "debunkd/mlp.hpp"

namespace debunkd {

// Negative-samples regularizer: coordinates where the policy puts less mass
// than the bad-experience model are penalized by pi_k^2; the rest contribute
// nothing (pi_k == m_k counts as unpenalized).
double negative_regularizer(std::span<const double> pi, std::span<const double> m);
// dN/dpi: 2*pi_k on penalized coordinates, 0 elsewhere.
std::vector<double> negative_regularizer_dpi(std::span<const double> pi,
                                             std::span<const double> m);

// log arguments are clamped to [1e-8, 1] inside every loss; a clamped term
// contributes no gradient.
double clamped_log(double v);

struct TrainConfig {
  int iterations = 1000;
  int batch_good = 64;   // tau_E minibatch
  int batch_bad = 64;    // tau_B minibatch
  int disc_updates = 1;
  int policy_updates = 1;
  double gamma_r = 0.99;              // discount for policy returns
  double lambda = 0.01;               // causal-entropy coefficient
  double lambda1 = 0.1;               // negative-regularizer coefficient
  bool use_augmented_state = true;    // off: s' is the zero vector everywhere
  bool use_negative_samples = true;   // off: no model training, lambda1 ignored
  int good_capacity = 20;
  double bad_fraction = 0.1;
  int bad_cap = 100;
  std::vector<int> hidden = {64, 64};
  double lr_policy = 1e-3;
  double lr_disc = 1e-3;
  double lr_neg = 1e-3;
  int checkpoint_every = 0;  // 0 disables
  std::string checkpoint_dir;
};

// One episode following the given policy; s' is zeroed when the augmented
// state is disabled. The env must be freshly constructed.
EpisodeTrace rollout_policy(MitigationEnv& env, const Mlp& policy,
                            bool use_augmented_state, RngStream& action_rng);

// --- losses (value + gradient pairs; the value side feeds the
// finite-difference checker) ---

// Discriminator objective of the adversarial game, ascended in phi:
//   mean_agent log D(s, s', a) + mean_expert log(1 - D(s, s', a)).
double disc_objective(const Mlp& disc, std::span<const TraceStep* const> agent,
                      std::span<const TraceStep* const> expert);
Gradients disc_objective_grad(const Mlp& disc, std::span<const TraceStep* const> agent,
                              std::span<const TraceStep* const> expert);

// Policy surrogate, ascended in theta:
//   mean_t [ adv_t log pi(a_t) - lambda log pi(a_t) - lambda1 N(pi_t, M_t) ].
// `neg_evals` counts negative-model forward passes when provided.
double policy_objective(const Mlp& policy, std::span<const TraceStep* const> steps,
                        std::span<const double> advantages, const Mlp* neg_model,
                        double lambda, double lambda1, long long* neg_evals = nullptr);
Gradients policy_objective_grad(const Mlp& policy, std::span<const TraceStep* const> steps,
                                std::span<const double> advantages, const Mlp* neg_model,
                                double lambda, double lambda1,
                                long long* neg_evals = nullptr);

// Negative-model cross-entropy over bad transitions (descended):
//   -mean_t log M(a_t | s_t, s'_t).
double neg_model_loss(const Mlp& model, std::span<const TraceStep* const> batch);
Gradients neg_model_loss_grad(const Mlp& model, std::span<const TraceStep* const> batch);

// --- update steps ---

void discriminator_update(Mlp& disc, Adam& opt, std::span<const TraceStep* const> agent,
                          std::span<const TraceStep* const> expert);

// Per-step rewards -log D, discounted returns, and a mean baseline pooled
// over every step of the given traces, then one ascent step.
void policy_update(Mlp& policy, Adam& opt, std::span<const EpisodeTrace* const> traces,
                   const Mlp& disc, const Mlp* neg_model, double lambda, double lambda1,
                   double gamma_r, long long* neg_evals = nullptr);

void train_negative_model(Mlp& model, Adam& opt, std::span<const TraceStep* const> batch);

// Discounted returns G_t = sum_{u>=t} gamma^{u-t} r_u with r_t = -log D.
std::vector<double> trace_returns(const EpisodeTrace& trace, const Mlp& disc,
                                  double gamma_r);

// Generative-adversarial self-imitation trainer (Algorithm-1 loop). The
// ablation flags reproduce GASIL (both off), NGASIL (augmented state off) and
// AGASIL (negative samples off).
class Trainer {
 public:
  Trainer(const SocialGraph& graph, MitigationConfig env_config, TrainConfig config,
          std::uint64_t seed);

  // One iteration: rollout, memory update, minibatches, model/discriminator/
  // policy updates. Returns the episode reward.
  double iterate();

  using Observer = std::function<void(int iteration, const Trainer&)>;
  std::vector<double> train();
  std::vector<double> train(const Observer& observer);

  EpisodeTrace evaluation_rollout(std::uint64_t episode_seed);

  const Mlp& policy() const { return policy_; }
  const Mlp& discriminator() const { return disc_; }
  const Mlp& negative_model() const { return neg_; }
  Mlp& mutable_policy() { return policy_; }
  const GoodMemory& good_memory() const { return good_; }
  const BadMemory& bad_memory() const { return bad_; }
  const TrainConfig& config() const { return cfg_; }
  int iteration() const { return iteration_; }
  long long negative_model_evals() const { return neg_evals_; }

  // Serialized policy + discriminator parameters, for trajectory comparisons.
  std::string snapshot_params() const;
  void save_checkpoints(const std::string& dir, const std::string& suffix) const;

 private:
  const SocialGraph* graph_;
  MitigationConfig env_cfg_;
  TrainConfig cfg_;
  std::uint64_t master_seed_;
  Mlp policy_, disc_, neg_;
  Adam policy_opt_, disc_opt_, neg_opt_;
  GoodMemory good_;
  BadMemory bad_;
  RngStream action_rng_, batch_rng_;
  int iteration_ = 0;
  long long neg_evals_ = 0;
};

}  // namespace debunkd
