#include <doctest.h>

#include <cmath>
#include <vector>

#include "debunkd/baselines.hpp"
#include "debunkd/graph.hpp"

using namespace debunkd;

namespace {

Observation obs_with(const std::vector<double>& followers,
                     const std::vector<double>& d_fake) {
  const int n = static_cast<int>(followers.size());
  Observation obs;
  obs.n = n;
  obs.s.assign(5 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    obs.s[n + i] = d_fake[i];
    obs.s[4 * n + i] = followers[i];
  }
  return obs;
}

}  // namespace

TEST_CASE("max-influence picks the most-followed unmasked user") {
  RngStream rng(1, Stream::Heuristic);
  const Observation obs = obs_with({3, 9, 1}, {0, 0, 0});
  CHECK(heuristic_select(HeuristicKind::MaxInf, obs, {1, 1, 1}, rng) == 1);
  CHECK(heuristic_select(HeuristicKind::MaxInf, obs, {1, 0, 1}, rng) == 0);
}

TEST_CASE("max-defense picks the most active unmasked fake-news poster") {
  RngStream rng(2, Stream::Heuristic);
  const Observation obs = obs_with({0, 0, 0}, {0, 2, 5});
  CHECK(heuristic_select(HeuristicKind::MaxDef, obs, {1, 1, 1}, rng) == 2);
  CHECK(heuristic_select(HeuristicKind::MaxDef, obs, {1, 1, 0}, rng) == 1);
}

TEST_CASE("ties break toward the lowest index") {
  RngStream rng(3, Stream::Heuristic);
  const Observation obs = obs_with({4, 4, 4}, {1, 1, 1});
  CHECK(heuristic_select(HeuristicKind::MaxInf, obs, {1, 1, 1}, rng) == 0);
  CHECK(heuristic_select(HeuristicKind::MaxDef, obs, {0, 1, 1}, rng) == 1);
}

TEST_CASE("rnd with a single unmasked entry returns it with certainty") {
  const Observation obs = obs_with({1, 2, 3}, {0, 0, 0});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, Stream::Heuristic);
    CHECK(heuristic_select(HeuristicKind::Rnd, obs, {0, 1, 0}, rng) == 1);
  }
}

TEST_CASE("all-masked selection is rejected") {
  RngStream rng(4, Stream::Heuristic);
  const Observation obs = obs_with({1, 2}, {0, 0});
  CHECK_THROWS(heuristic_select(HeuristicKind::Rnd, obs, {0, 0}, rng));
  CHECK_THROWS(heuristic_select(HeuristicKind::MaxInf, obs, {0, 0}, rng));
}

TEST_CASE("argmax heuristics match a brute-force oracle on random inputs") {
  RngStream rng(5, Stream::Heuristic);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(12));
    std::vector<double> followers(n), fakes(n);
    std::vector<char> mask(n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      followers[i] = std::floor(rng.uniform(0.0, 6.0));  // ties likely
      fakes[i] = std::floor(rng.uniform(0.0, 6.0));
      mask[i] = rng.bernoulli(0.7);
      any = any || mask[i];
    }
    if (!any) mask[static_cast<int>(rng.below(n))] = 1;
    const Observation obs = obs_with(followers, fakes);

    int best_inf = -1, best_def = -1;
    for (int i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      if (best_inf < 0 || followers[i] > followers[best_inf]) best_inf = i;
      if (best_def < 0 || fakes[i] > fakes[best_def]) best_def = i;
    }
    CHECK(heuristic_select(HeuristicKind::MaxInf, obs, mask, rng) == best_inf);
    CHECK(heuristic_select(HeuristicKind::MaxDef, obs, mask, rng) == best_def);

    // strictly monotone rescalings leave the max-influence choice unchanged
    Observation scaled = obs;
    for (int i = 0; i < n; ++i) {
      const double e = followers[i];
      scaled.s[4 * n + i] = 2.5 * e + 3.0;
    }
    CHECK(heuristic_select(HeuristicKind::MaxInf, scaled, mask, rng) == best_inf);
    for (int i = 0; i < n; ++i) scaled.s[4 * n + i] = std::exp(followers[i] / 2.0);
    CHECK(heuristic_select(HeuristicKind::MaxInf, scaled, mask, rng) == best_inf);
  }
}

TEST_CASE("rnd is deterministic given the seed") {
  const Observation obs = obs_with({1, 1, 1, 1, 1}, {0, 0, 0, 0, 0});
  RngStream a(9, Stream::Heuristic), b(9, Stream::Heuristic);
  for (int i = 0; i < 50; ++i)
    CHECK(heuristic_select(HeuristicKind::Rnd, obs, {1, 1, 1, 1, 1}, a) ==
          heuristic_select(HeuristicKind::Rnd, obs, {1, 1, 1, 1, 1}, b));
}

TEST_CASE("heuristic episodes run the full campaign machinery") {
  const SocialGraph g = generate_scale_free(40, 0.05, 0.8, 0.15, 6);
  MitigationConfig cfg;
  cfg.initial_spreaders = 5;
  cfg.budget = 10.0;

  for (const auto kind : {HeuristicKind::Rnd, HeuristicKind::MaxInf, HeuristicKind::MaxDef}) {
    const auto rewards = run_heuristic(g, cfg, kind, 5, 31);
    CHECK(rewards.size() == 5);
    for (double r : rewards) {
      CHECK(r >= 0.0);
      CHECK(r <= std::log(g.n + 1.0));
    }
    CHECK(run_heuristic(g, cfg, kind, 5, 31) == rewards);
  }
}

TEST_CASE("heuristic names round-trip") {
  for (const auto kind : {HeuristicKind::Rnd, HeuristicKind::MaxInf, HeuristicKind::MaxDef})
    CHECK(heuristic_from_string(heuristic_name(kind)) == kind);
  CHECK_THROWS(heuristic_from_string("greedy"));
}
