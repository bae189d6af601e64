#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "debunkd/propagation.hpp"

using namespace debunkd;

namespace {

SocialGraph star_graph(int leaves) {
  SocialGraph g;
  g.n = leaves + 1;
  g.out_edges.resize(g.n);
  for (int leaf = 1; leaf <= leaves; ++leaf) g.out_edges[0].push_back(leaf);
  finalize_derived(g);
  return g;
}

SocialGraph lone_node() {
  SocialGraph g;
  g.n = 1;
  g.out_edges.resize(1);
  finalize_derived(g);
  return g;
}

}  // namespace

TEST_CASE("logistic basics") {
  CHECK(logistic(2.0, 2.0, 1.0) == doctest::Approx(0.5));
  CHECK(logistic(50.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(logistic(-50.0, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(logistic(3.0, 1.0, 1.0) == doctest::Approx(0.880797).epsilon(1e-5));
}

TEST_CASE("transition probabilities are mutually exclusive") {
  UserDynamics u;
  u.n_fake = 2;
  u.n_true = 2;
  CHECK(transition_probs(u, 1.0, 1.0) == std::pair<double, double>{0.0, 0.0});

  u.n_fake = 3;
  u.n_true = 1;
  auto [pi, pr] = transition_probs(u, 1.0, 1.0);
  CHECK(pi == doctest::Approx(0.731059).epsilon(1e-5));
  CHECK(pr == 0.0);

  // mirrored counts swap the roles exactly
  u.n_fake = 1;
  u.n_true = 3;
  auto [pi2, pr2] = transition_probs(u, 1.0, 1.0);
  CHECK(pi2 == 0.0);
  CHECK(pr2 == doctest::Approx(0.731059).epsilon(1e-5));
  CHECK(pr2 == pi);

  for (long long f = 0; f <= 6; ++f)
    for (long long t = 0; t <= 6; ++t) {
      u.n_fake = f;
      u.n_true = t;
      auto [a, b] = transition_probs(u, 1.7, 1.0);
      CHECK(a * b == 0.0);
    }
}

TEST_CASE("more followers means harder to convince") {
  UserDynamics u;
  u.n_fake = 4;
  u.n_true = 1;
  double prev = 1.0;
  for (double midpoint : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    const double p = transition_probs(u, midpoint, 1.0).first;
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("intensity decay") {
  UserDynamics u;
  u.e_state = EState::Infected;
  u.xi = 1.0;
  u.t_c = 2.0;
  CHECK(intensity_at(u, 2.0, 1.0) == 1.0);
  CHECK(intensity_at(u, 3.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(intensity_at(u, 100.0, 0.0) == 1.0);
  CHECK_THROWS(intensity_at(u, 1.0, 1.0));  // t precedes t_c

  UserDynamics s;  // not spreading
  CHECK_THROWS(intensity_at(s, 0.0, 1.0));

  // nonincreasing between resets
  double prev = 10.0;
  for (double t = 2.0; t < 6.0; t += 0.25) {
    const double v = intensity_at(u, t, 0.7);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("tick without spreaders is a no-op") {
  const SocialGraph g = star_graph(4);
  SimState sim(g, 1);
  PropagationParams params;
  const auto events = sim.tick(params);
  CHECK(events.empty());
  for (int i = 0; i < g.n; ++i) {
    CHECK(sim.user(i).e_state == EState::Susceptible);
    CHECK(sim.user(i).n_fake == 0);
    CHECK(sim.user(i).n_true == 0);
  }
  CHECK(sim.clock() == doctest::Approx(params.dt));
}

TEST_CASE("a saturated hub delivers to every follower exactly once per tick") {
  const SocialGraph g = star_graph(6);
  SimState sim(g, 1);
  PropagationParams params;
  params.dt = 1.0;
  params.omega = 0.0;
  sim.set_user_state(0, EState::Infected, 10.0, 0.0);  // min(1, 10*1) == 1

  const auto events = sim.tick(params);
  REQUIRE(events.size() == 1);
  CHECK(events[0].poster == 0);
  CHECK(events[0].fake);
  CHECK(sim.posts_fake(0) == 1);
  for (int leaf = 1; leaf <= 6; ++leaf) {
    CHECK(sim.user(leaf).n_fake == 1);
    CHECK(sim.user(leaf).e_state != EState::Susceptible);  // first receipt exposes
  }
}

TEST_CASE("expected post count matches the decaying-rate integral") {
  // one spreader, omega = 1, horizon T = 3: the rate integrates to
  // xi * (1 - exp(-omega T)) / omega
  const SocialGraph g = lone_node();
  PropagationParams params;
  params.omega = 1.0;
  params.dt = 0.01;
  const double xi = 1.0;
  const double expected = xi * (1.0 - std::exp(-3.0)) / 1.0;

  const int trials = 2000;
  long long posts = 0;
  for (int trial = 0; trial < trials; ++trial) {
    SimState sim(g, 1000 + trial);
    sim.set_user_state(0, EState::Infected, xi, 0.0);
    sim.run_until(3.0, params);
    posts += sim.posts_fake(0);
  }
  const double mean = static_cast<double>(posts) / trials;
  CHECK(std::abs(mean - expected) / expected < 0.05);
}

TEST_CASE("run_until: degenerate, deterministic, and splittable") {
  const SocialGraph g = generate_scale_free(60, 0.05, 0.8, 0.15, 4);
  PropagationParams params;

  SimState a(g, 9);
  a.seed_fake_spreaders(8, params);
  a.run_until(a.clock(), params);
  CHECK(a.clock() == 0.0);

  SimState b(g, 9);
  b.seed_fake_spreaders(8, params);

  // split at t = 5 versus straight to t = 10, same seed stream
  a.run_until(5.0, params);
  a.run_until(10.0, params);
  b.run_until(10.0, params);
  CHECK(a.clock() == b.clock());
  for (int i = 0; i < g.n; ++i) {
    CHECK(a.user(i).e_state == b.user(i).e_state);
    CHECK(a.user(i).n_fake == b.user(i).n_fake);
    CHECK(a.user(i).n_true == b.user(i).n_true);
    CHECK(a.user(i).xi == b.user(i).xi);
    CHECK(a.user(i).t_c == b.user(i).t_c);
    CHECK(a.posts_fake(i) == b.posts_fake(i));
    CHECK(a.posts_true(i) == b.posts_true(i));
  }

  CHECK_THROWS(a.run_until(5.0, params));  // precedes the clock
}

TEST_CASE("seed_fake_spreaders picks exactly k distinct users") {
  const SocialGraph g = generate_scale_free(1250, 0.05, 0.8, 0.15, 2);
  PropagationParams params;

  SimState none(g, 3);
  none.seed_fake_spreaders(0, params);
  for (int i = 0; i < g.n; ++i) CHECK(none.user(i).e_state == EState::Susceptible);

  SimState some(g, 3);
  some.seed_fake_spreaders(20, params);
  int infected = 0;
  for (int i = 0; i < g.n; ++i) {
    if (some.user(i).e_state == EState::Infected) {
      ++infected;
      CHECK(some.user(i).xi >= 0.5);
      CHECK(some.user(i).xi <= 1.5);
      CHECK(some.user(i).t_c == 0.0);
    } else {
      CHECK(some.user(i).e_state == EState::Susceptible);
    }
  }
  CHECK(infected == 20);

  SimState all(g, 3);
  all.seed_fake_spreaders(g.n, params);
  for (int i = 0; i < g.n; ++i) CHECK(all.user(i).e_state == EState::Infected);

  SimState over(g, 3);
  CHECK_THROWS(over.seed_fake_spreaders(g.n + 1, params));
}

TEST_CASE("deploy_debunker semantics") {
  const SocialGraph g = star_graph(3);
  PropagationParams params;
  SimState sim(g, 5);

  sim.deploy_debunker(2, params);
  CHECK(sim.user(2).e_state == EState::Recovered);
  CHECK(sim.user(2).t_c == 0.0);
  for (int i : {0, 1, 3}) CHECK(sim.user(i).e_state == EState::Susceptible);

  // flipping an infected user reduces the infected count
  sim.set_user_state(1, EState::Infected, 1.0, 0.0);
  sim.deploy_debunker(1, params);
  CHECK(sim.user(1).e_state == EState::Recovered);

  // redeploying refreshes the intensity clock
  sim.run_until(2.0, params);
  const double before = sim.user(2).t_c;
  sim.deploy_debunker(2, params);
  CHECK(sim.user(2).t_c == 2.0);
  CHECK(sim.user(2).t_c != before);

  CHECK_THROWS(sim.deploy_debunker(g.n, params));
  CHECK_THROWS(sim.deploy_debunker(-1, params));
}

TEST_CASE("counters never decrease and e-states stay valid under randomized runs") {
  const SocialGraph g = generate_scale_free(80, 0.05, 0.8, 0.15, 13);
  PropagationParams params;
  SimState sim(g, 21);
  sim.seed_fake_spreaders(10, params);
  sim.deploy_debunker(3, params);

  std::vector<long long> fake(g.n, 0), truth(g.n, 0);
  for (int t = 0; t < 300; ++t) {
    sim.tick(params);
    for (int i = 0; i < g.n; ++i) {
      const auto& u = sim.user(i);
      CHECK(u.n_fake >= fake[i]);
      CHECK(u.n_true >= truth[i]);
      fake[i] = u.n_fake;
      truth[i] = u.n_true;
      const bool valid = u.e_state == EState::Susceptible || u.e_state == EState::Exposed ||
                         u.e_state == EState::Infected || u.e_state == EState::Recovered;
      CHECK(valid);
    }
  }
}

TEST_CASE("empirical intensity files replace the uniform sampler") {
  const auto path = std::filesystem::temp_directory_path() / "dbk_intensity.txt";
  {
    std::ofstream out(path);
    out << "0.7\n0.7\n0.7\n";
  }
  PropagationParams params;
  params.intensity = IntensityDistribution::from_file(path.string());
  const SocialGraph g = lone_node();
  SimState sim(g, 99);
  sim.seed_fake_spreaders(1, params);
  CHECK(sim.user(0).xi == 0.7);

  CHECK_THROWS(IntensityDistribution::from_file("/nonexistent/xi.txt"));
}
