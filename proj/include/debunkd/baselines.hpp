#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "debunkd/env.hpp"
#include "debunkd/rng.hpp"

namespace debunkd {

// Non-learning selection policies. RND draws uniformly over the unmasked
// users; MAX_INF takes the unmasked user with the most followers; MAX_DEF the
// unmasked user with the highest observed fake-news post count. Ties go to
// the lowest index.
enum class HeuristicKind { Rnd, MaxInf, MaxDef };

HeuristicKind heuristic_from_string(const std::string& name);
std::string heuristic_name(HeuristicKind kind);

int heuristic_select(HeuristicKind kind, const Observation& obs,
                     const std::vector<char>& mask, RngStream& rng);

EpisodeTrace rollout_heuristic(MitigationEnv& env, HeuristicKind kind, RngStream& rng);

// Reward series over independently seeded episodes (heuristics do not
// learn; this mirrors the episode budget of the trained methods).
std::vector<double> run_heuristic(const SocialGraph& graph, const MitigationConfig& config,
                                  HeuristicKind kind, int episodes, std::uint64_t seed);

}  // namespace debunkd
