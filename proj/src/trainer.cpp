#include "debunkd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace debunkd {

double clamped_log(double v) { return std::log(std::clamp(v, 1e-8, 1.0)); }

double negative_regularizer(std::span<const double> pi, std::span<const double> m) {
  if (pi.size() != m.size())
    throw std::invalid_argument("negative_regularizer: size mismatch");
  double n = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k)
    if (pi[k] - m[k] < 0.0) n += pi[k] * pi[k];
  return n;
}

std::vector<double> negative_regularizer_dpi(std::span<const double> pi,
                                             std::span<const double> m) {
  if (pi.size() != m.size())
    throw std::invalid_argument("negative_regularizer_dpi: size mismatch");
  std::vector<double> g(pi.size(), 0.0);
  for (std::size_t k = 0; k < pi.size(); ++k)
    if (pi[k] - m[k] < 0.0) g[k] = 2.0 * pi[k];
  return g;
}

EpisodeTrace rollout_policy(MitigationEnv& env, const Mlp& policy,
                            bool use_augmented_state, RngStream& action_rng) {
  const int n = env.sim().n();
  EpisodeTrace trace;
  while (!env.done()) {
    TraceStep step;
    step.s = env.observe();
    step.s_prime = use_augmented_state ? env.augmented()
                                       : AugmentedState{std::vector<double>(6 * n, 0.0)};
    step.mask = env.action_mask();
    const auto probs = policy_forward(policy, step.s.s, step.s_prime.v, step.mask);
    step.action = action_rng.categorical(probs);
    env.step(step.action);
    trace.steps.push_back(std::move(step));
  }
  env.finish();
  trace.reward = env.episodic_reward();
  return trace;
}

namespace {

std::vector<double> disc_input(const TraceStep& step) {
  std::vector<double> input;
  const int n = step.s.n;
  input.reserve(12 * n);
  input.insert(input.end(), step.s.s.begin(), step.s.s.end());
  input.insert(input.end(), step.s_prime.v.begin(), step.s_prime.v.end());
  input.resize(12 * n, 0.0);
  input[11 * n + step.action] = 1.0;
  return input;
}

std::vector<double> policy_input(const TraceStep& step) {
  std::vector<double> input;
  input.reserve(step.s.s.size() + step.s_prime.v.size());
  input.insert(input.end(), step.s.s.begin(), step.s.s.end());
  input.insert(input.end(), step.s_prime.v.begin(), step.s_prime.v.end());
  return input;
}

}  // namespace

double disc_objective(const Mlp& disc, std::span<const TraceStep* const> agent,
                      std::span<const TraceStep* const> expert) {
  if (agent.empty() || expert.empty())
    throw std::invalid_argument("disc_objective: empty batch");
  double agent_term = 0.0;
  for (const TraceStep* s : agent)
    agent_term += clamped_log(forward(disc, disc_input(*s))[0]);
  double expert_term = 0.0;
  for (const TraceStep* s : expert)
    expert_term += clamped_log(1.0 - forward(disc, disc_input(*s))[0]);
  return agent_term / static_cast<double>(agent.size()) +
         expert_term / static_cast<double>(expert.size());
}

Gradients disc_objective_grad(const Mlp& disc, std::span<const TraceStep* const> agent,
                              std::span<const TraceStep* const> expert) {
  if (agent.empty() || expert.empty())
    throw std::invalid_argument("disc_objective_grad: empty batch");
  Gradients g = make_gradients(disc);
  ForwardCache cache;
  // d/dz log(sigmoid(z)) = 1 - D; d/dz log(1 - sigmoid(z)) = -D. A clamped
  // log contributes nothing.
  for (const TraceStep* s : agent) {
    const double d = forward(disc, disc_input(*s), nullptr, &cache)[0];
    const double dz = d > 1e-8 ? (1.0 - d) / static_cast<double>(agent.size()) : 0.0;
    backward_from_logits(disc, cache, std::vector<double>{dz}, g);
  }
  for (const TraceStep* s : expert) {
    const double d = forward(disc, disc_input(*s), nullptr, &cache)[0];
    const double dz = 1.0 - d > 1e-8 ? -d / static_cast<double>(expert.size()) : 0.0;
    backward_from_logits(disc, cache, std::vector<double>{dz}, g);
  }
  return g;
}

double policy_objective(const Mlp& policy, std::span<const TraceStep* const> steps,
                        std::span<const double> advantages, const Mlp* neg_model,
                        double lambda, double lambda1, long long* neg_evals) {
  if (steps.empty()) throw std::invalid_argument("policy_objective: empty batch");
  if (steps.size() != advantages.size())
    throw std::invalid_argument("policy_objective: advantage count mismatch");
  const double count = static_cast<double>(steps.size());
  double total = 0.0;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const TraceStep& step = *steps[t];
    const auto input = policy_input(step);
    const auto pi = forward(policy, input, &step.mask);
    const double logp = clamped_log(pi[step.action]);
    total += (advantages[t] - lambda) * logp;
    if (neg_model && lambda1 != 0.0) {
      const auto m = forward(*neg_model, input);
      if (neg_evals) ++*neg_evals;
      total -= lambda1 * negative_regularizer(pi, m);
    }
  }
  return total / count;
}

Gradients policy_objective_grad(const Mlp& policy, std::span<const TraceStep* const> steps,
                                std::span<const double> advantages, const Mlp* neg_model,
                                double lambda, double lambda1, long long* neg_evals) {
  if (steps.empty()) throw std::invalid_argument("policy_objective_grad: empty batch");
  if (steps.size() != advantages.size())
    throw std::invalid_argument("policy_objective_grad: advantage count mismatch");
  const double count = static_cast<double>(steps.size());
  Gradients g = make_gradients(policy);
  ForwardCache cache;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const TraceStep& step = *steps[t];
    const auto input = policy_input(step);
    const auto pi = forward(policy, input, &step.mask, &cache);

    // (adv - lambda) * d log pi(a) / dlogits = coeff * (onehot - pi) on the
    // unmasked block; nothing flows through a clamped log.
    std::vector<double> dlogits(pi.size(), 0.0);
    if (pi[step.action] > 1e-8) {
      const double coeff = (advantages[t] - lambda) / count;
      for (std::size_t k = 0; k < pi.size(); ++k) {
        if (!step.mask[k]) continue;
        dlogits[k] = coeff * ((static_cast<int>(k) == step.action ? 1.0 : 0.0) - pi[k]);
      }
    }

    if (neg_model && lambda1 != 0.0) {
      const auto m = forward(*neg_model, input);
      if (neg_evals) ++*neg_evals;
      auto dn_dpi = negative_regularizer_dpi(pi, m);
      for (double& v : dn_dpi) v *= -lambda1 / count;
      const auto dn_dlogits = softmax_backward(pi, dn_dpi, &step.mask);
      for (std::size_t k = 0; k < dlogits.size(); ++k) dlogits[k] += dn_dlogits[k];
    }
    backward_from_logits(policy, cache, dlogits, g);
  }
  return g;
}

double neg_model_loss(const Mlp& model, std::span<const TraceStep* const> batch) {
  if (batch.empty()) throw std::invalid_argument("neg_model_loss: empty batch");
  double total = 0.0;
  for (const TraceStep* s : batch)
    total -= clamped_log(forward(model, policy_input(*s))[s->action]);
  return total / static_cast<double>(batch.size());
}

Gradients neg_model_loss_grad(const Mlp& model, std::span<const TraceStep* const> batch) {
  if (batch.empty()) throw std::invalid_argument("neg_model_loss_grad: empty batch");
  Gradients g = make_gradients(model);
  ForwardCache cache;
  const double count = static_cast<double>(batch.size());
  for (const TraceStep* s : batch) {
    const auto m = forward(model, policy_input(*s), nullptr, &cache);
    std::vector<double> dlogits(m.size(), 0.0);
    if (m[s->action] > 1e-8) {
      // d(-log m_a)/dlogits = pi - onehot for an unmasked softmax
      for (std::size_t k = 0; k < m.size(); ++k)
        dlogits[k] = (m[k] - (static_cast<int>(k) == s->action ? 1.0 : 0.0)) / count;
    }
    backward_from_logits(model, cache, dlogits, g);
  }
  return g;
}

void discriminator_update(Mlp& disc, Adam& opt, std::span<const TraceStep* const> agent,
                          std::span<const TraceStep* const> expert) {
  opt.step(disc, disc_objective_grad(disc, agent, expert), Direction::Ascend);
}

void train_negative_model(Mlp& model, Adam& opt, std::span<const TraceStep* const> batch) {
  opt.step(model, neg_model_loss_grad(model, batch), Direction::Descend);
}

std::vector<double> trace_returns(const EpisodeTrace& trace, const Mlp& disc,
                                  double gamma_r) {
  std::vector<double> returns(trace.steps.size(), 0.0);
  double acc = 0.0;
  for (int t = static_cast<int>(trace.steps.size()) - 1; t >= 0; --t) {
    const TraceStep& step = trace.steps[t];
    const double reward =
        -clamped_log(discriminator_forward(disc, step.s.s, step.s_prime.v, step.action));
    acc = reward + gamma_r * acc;
    returns[t] = acc;
  }
  return returns;
}

void policy_update(Mlp& policy, Adam& opt, std::span<const EpisodeTrace* const> traces,
                   const Mlp& disc, const Mlp* neg_model, double lambda, double lambda1,
                   double gamma_r, long long* neg_evals) {
  std::vector<const TraceStep*> steps;
  std::vector<double> returns;
  for (const EpisodeTrace* trace : traces) {
    const auto g = trace_returns(*trace, disc, gamma_r);
    for (std::size_t t = 0; t < trace->steps.size(); ++t) {
      steps.push_back(&trace->steps[t]);
      returns.push_back(g[t]);
    }
  }
  if (steps.empty()) throw std::invalid_argument("policy_update: no steps");

  double baseline = 0.0;
  for (double g : returns) baseline += g;
  baseline /= static_cast<double>(returns.size());
  for (double& g : returns) g -= baseline;

  opt.step(policy,
           policy_objective_grad(policy, steps, returns, neg_model, lambda, lambda1,
                                 neg_evals),
           Direction::Ascend);
}

Trainer::Trainer(const SocialGraph& graph, MitigationConfig env_config, TrainConfig config,
                 std::uint64_t seed)
    : graph_(&graph),
      env_cfg_(env_config),
      cfg_(std::move(config)),
      master_seed_(seed),
      good_(cfg_.good_capacity),
      bad_(cfg_.bad_fraction, cfg_.bad_cap),
      action_rng_(seed, Stream::Action),
      batch_rng_(seed, Stream::MemorySample) {
  if (cfg_.iterations < 1) throw std::invalid_argument("Trainer: iterations must be >= 1");
  const int n = graph.n;
  std::vector<int> policy_dims{11 * n};
  std::vector<int> disc_dims{12 * n};
  for (int h : cfg_.hidden) {
    policy_dims.push_back(h);
    disc_dims.push_back(h);
  }
  policy_dims.push_back(n);
  disc_dims.push_back(1);

  policy_ = make_mlp(policy_dims, Head::MaskedSoftmax);
  neg_ = make_mlp(policy_dims, Head::Softmax);
  disc_ = make_mlp(disc_dims, Head::Sigmoid);
  RngStream policy_init(seed, Stream::PolicyInit);
  RngStream disc_init(seed, Stream::DiscriminatorInit);
  RngStream neg_init(seed, Stream::NegativeModelInit);
  init_glorot(policy_, policy_init);
  init_glorot(disc_, disc_init);
  init_glorot(neg_, neg_init);
  policy_opt_ = Adam(policy_, {.lr = cfg_.lr_policy});
  disc_opt_ = Adam(disc_, {.lr = cfg_.lr_disc});
  neg_opt_ = Adam(neg_, {.lr = cfg_.lr_neg});
}

double Trainer::iterate() {
  MitigationEnv env(*graph_, env_cfg_,
                    mix_seed(master_seed_, static_cast<std::uint64_t>(iteration_)));
  EpisodeTrace trace = rollout_policy(env, policy_, cfg_.use_augmented_state, action_rng_);
  const double reward = trace.reward;

  // Memories first, minibatches after (the current episode competes for a
  // slot before tau_E is drawn).
  good_.insert(trace);
  bad_.insert(trace);

  if (!trace.steps.empty() && good_.total_steps() > 0) {
    const auto expert = sample_transitions(good_, cfg_.batch_good, batch_rng_);
    std::vector<const TraceStep*> agent;
    agent.reserve(trace.steps.size());
    for (const auto& s : trace.steps) agent.push_back(&s);

    // The bad-experience model only participates once the bad memory has
    // visible content; before that there is nothing to imitate-avoid.
    const bool neg_active = cfg_.use_negative_samples && bad_.total_steps() > 0;
    if (neg_active) {
      const auto bad_batch = sample_transitions(bad_, cfg_.batch_bad, batch_rng_);
      train_negative_model(neg_, neg_opt_, bad_batch);
    }

    for (int u = 0; u < cfg_.disc_updates; ++u)
      discriminator_update(disc_, disc_opt_, agent, expert);

    const EpisodeTrace* current = &trace;
    for (int u = 0; u < cfg_.policy_updates; ++u)
      policy_update(policy_, policy_opt_, std::span<const EpisodeTrace* const>{&current, 1},
                    disc_, neg_active ? &neg_ : nullptr, cfg_.lambda, cfg_.lambda1,
                    cfg_.gamma_r, &neg_evals_);
  }

  ++iteration_;
  if (cfg_.checkpoint_every > 0 && iteration_ % cfg_.checkpoint_every == 0 &&
      !cfg_.checkpoint_dir.empty())
    save_checkpoints(cfg_.checkpoint_dir, "_iter" + std::to_string(iteration_));
  return reward;
}

std::vector<double> Trainer::train() { return train(Observer{}); }

std::vector<double> Trainer::train(const Observer& observer) {
  std::vector<double> rewards;
  rewards.reserve(cfg_.iterations);
  for (int it = 0; it < cfg_.iterations; ++it) {
    rewards.push_back(iterate());
    if (observer) observer(it, *this);
  }
  return rewards;
}

EpisodeTrace Trainer::evaluation_rollout(std::uint64_t episode_seed) {
  MitigationEnv env(*graph_, env_cfg_, episode_seed);
  RngStream rng(episode_seed, Stream::Action);
  return rollout_policy(env, policy_, cfg_.use_augmented_state, rng);
}

std::string Trainer::snapshot_params() const {
  return params_to_string(policy_, "policy") + params_to_string(disc_, "discriminator");
}

void Trainer::save_checkpoints(const std::string& dir, const std::string& suffix) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  save_params_file(policy_, "policy", (fs::path(dir) / ("policy" + suffix + ".txt")).string());
  save_params_file(disc_, "discriminator",
                   (fs::path(dir) / ("discriminator" + suffix + ".txt")).string());
  save_params_file(neg_, "negative_model",
                   (fs::path(dir) / ("negative_model" + suffix + ".txt")).string());
}

}  // namespace debunkd
