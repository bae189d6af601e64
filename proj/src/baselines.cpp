#include "debunkd/baselines.hpp"

#include <stdexcept>

namespace debunkd {

HeuristicKind heuristic_from_string(const std::string& name) {
  if (name == "rnd") return HeuristicKind::Rnd;
  if (name == "max_inf") return HeuristicKind::MaxInf;
  if (name == "max_def") return HeuristicKind::MaxDef;
  throw std::invalid_argument("unknown heuristic: " + name);
}

std::string heuristic_name(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::Rnd: return "rnd";
    case HeuristicKind::MaxInf: return "max_inf";
    case HeuristicKind::MaxDef: return "max_def";
  }
  return "?";
}

int heuristic_select(HeuristicKind kind, const Observation& obs,
                     const std::vector<char>& mask, RngStream& rng) {
  if (static_cast<int>(mask.size()) != obs.n)
    throw std::invalid_argument("heuristic_select: mask size mismatch");

  if (kind == HeuristicKind::Rnd) {
    std::vector<int> candidates;
    for (int i = 0; i < obs.n; ++i)
      if (mask[i]) candidates.push_back(i);
    if (candidates.empty()) throw std::logic_error("heuristic_select: all actions masked");
    return candidates[rng.below(candidates.size())];
  }

  int best = -1;
  double best_score = 0.0;
  for (int i = 0; i < obs.n; ++i) {
    if (!mask[i]) continue;
    const double score = kind == HeuristicKind::MaxInf ? obs.followers(i) : obs.d_fake(i);
    if (best < 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  if (best < 0) throw std::logic_error("heuristic_select: all actions masked");
  return best;
}

EpisodeTrace rollout_heuristic(MitigationEnv& env, HeuristicKind kind, RngStream& rng) {
  EpisodeTrace trace;
  while (!env.done()) {
    TraceStep step;
    step.s = env.observe();
    step.s_prime = env.augmented();
    step.mask = env.action_mask();
    step.action = heuristic_select(kind, step.s, step.mask, rng);
    env.step(step.action);
    trace.steps.push_back(std::move(step));
  }
  env.finish();
  trace.reward = env.episodic_reward();
  return trace;
}

std::vector<double> run_heuristic(const SocialGraph& graph, const MitigationConfig& config,
                                  HeuristicKind kind, int episodes, std::uint64_t seed) {
  std::vector<double> rewards;
  rewards.reserve(episodes);
  RngStream rng(seed, Stream::Heuristic);
  for (int ep = 0; ep < episodes; ++ep) {
    MitigationEnv env(graph, config, mix_seed(seed, static_cast<std::uint64_t>(ep)));
    rewards.push_back(rollout_heuristic(env, kind, rng).reward);
  }
  return rewards;
}

}  // namespace debunkd
