#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "debunkd/memory.hpp"

using namespace debunkd;

namespace {

EpisodeTrace make_episode(double reward, int length = 1, int n = 2, int action = 0) {
  EpisodeTrace t;
  t.reward = reward;
  for (int i = 0; i < length; ++i) {
    TraceStep s;
    s.s.n = n;
    s.s.s.assign(5 * n, reward);  // payload marks the episode
    s.s_prime.v.assign(6 * n, 0.0);
    s.mask.assign(n, 1);
    s.action = action;
    t.steps.push_back(std::move(s));
  }
  return t;
}

}  // namespace

TEST_CASE("good memory keeps the top-K with earlier-arrival tie breaking") {
  GoodMemory mem(20);
  for (int r = 5; r <= 24; ++r) mem.insert(make_episode(r));
  REQUIRE(mem.size() == 20);

  // below the current minimum: unchanged
  mem.insert(make_episode(3.0));
  CHECK(mem.size() == 20);
  CHECK(mem.entries().back().trace.reward == 5.0);

  // equal to the minimum: the incumbent stays
  mem.insert(make_episode(5.0));
  CHECK(mem.entries().back().trace.reward == 5.0);
  CHECK(mem.entries().back().arrival == 0);

  // above the minimum: evicts it
  mem.insert(make_episode(30.0));
  CHECK(mem.entries().front().trace.reward == 30.0);
  CHECK(mem.entries().back().trace.reward == 6.0);

  CHECK_THROWS(mem.insert(make_episode(std::nan(""))));
  CHECK_THROWS(GoodMemory(0));
}

TEST_CASE("memories equal the top and bottom of a full sort after 200 episodes") {
  RngStream rng(8, Stream::Seeding);
  GoodMemory good(20);
  BadMemory bad(0.1, 100);

  struct Ep {
    double reward;
    std::uint64_t arrival;
  };
  std::vector<Ep> all;
  for (std::uint64_t i = 0; i < 200; ++i) {
    // a few deliberate ties
    const double r = rng.bernoulli(0.2) ? 1.5 : rng.uniform(0.0, 10.0);
    good.insert(make_episode(r));
    bad.insert(make_episode(r));
    all.push_back({r, i});
  }

  auto sorted = all;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Ep& a, const Ep& b) {
    if (a.reward != b.reward) return a.reward > b.reward;
    return a.arrival < b.arrival;
  });

  REQUIRE(good.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(good.entries()[i].trace.reward == sorted[i].reward);
    CHECK(good.entries()[i].arrival == sorted[i].arrival);
  }

  REQUIRE(bad.size() == 20);  // floor(0.1 * 200)
  const auto bad_view = bad.entries();
  auto bottom = all;
  std::stable_sort(bottom.begin(), bottom.end(), [](const Ep& a, const Ep& b) {
    if (a.reward != b.reward) return a.reward < b.reward;
    return a.arrival < b.arrival;
  });
  for (int i = 0; i < 20; ++i) {
    CHECK(bad_view[i].trace.reward == bottom[i].reward);
    CHECK(bad_view[i].arrival == bottom[i].arrival);
  }

  // no overlap once both are at capacity
  double good_min = good.entries().back().trace.reward;
  double bad_max = bad_view[bad.size() - 1].trace.reward;
  CHECK(good_min >= bad_max);
}

TEST_CASE("bad memory window grows with the episode count and respects its cap") {
  BadMemory bad(0.1, 3);
  for (int i = 0; i < 9; ++i) bad.insert(make_episode(i));
  CHECK(bad.episodes_seen() == 9);
  CHECK(bad.size() == 0);  // floor(0.9)
  bad.insert(make_episode(100.0));
  CHECK(bad.size() == 1);
  for (int i = 0; i < 50; ++i) bad.insert(make_episode(i));
  CHECK(bad.size() == 3);  // capped
  CHECK(bad.entries()[0].trace.reward == 0.0);

  CHECK_THROWS(BadMemory(-0.1, 10));
  CHECK_THROWS(BadMemory(1.5, 10));
  CHECK_THROWS(BadMemory(0.1, 0));
}

TEST_CASE("a single one-step episode repeats under sampling") {
  GoodMemory mem(5);
  mem.insert(make_episode(2.5, 1));
  RngStream rng(1, Stream::MemorySample);
  const auto batch = sample_transitions(mem, 4, rng);
  REQUIRE(batch.size() == 4);
  for (const TraceStep* s : batch) CHECK(s == batch[0]);
  CHECK(batch[0]->s.s[0] == 2.5);
}

TEST_CASE("sampling is uniform over the union of stored steps") {
  GoodMemory mem(10);
  for (int e = 0; e < 10; ++e) mem.insert(make_episode(e, 3));  // 30 steps total
  RngStream rng(99, Stream::MemorySample);
  const int draws = 100000;
  std::vector<int> counts(10, 0);
  const auto batch = sample_transitions(mem, draws, rng);
  for (const TraceStep* s : batch) {
    const int episode = static_cast<int>(s->s.s[0]);  // payload holds the reward
    ++counts[episode];
  }
  // each episode holds 3 of 30 steps: expectation 10000, sigma ~ 94.9
  const double expected = draws / 10.0;
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (int e = 0; e < 10; ++e)
    CHECK(std::abs(counts[e] - expected) <= 3.0 * sigma);
}

TEST_CASE("sampling is reproducible under a fixed seed and rejects empty memories") {
  GoodMemory mem(4);
  mem.insert(make_episode(1.0, 2));
  mem.insert(make_episode(2.0, 2));
  RngStream a(7, Stream::MemorySample), b(7, Stream::MemorySample);
  const auto ba = sample_transitions(mem, 16, a);
  const auto bb = sample_transitions(mem, 16, b);
  CHECK(ba == bb);

  GoodMemory empty(4);
  RngStream rng(7, Stream::MemorySample);
  CHECK_THROWS(sample_transitions(empty, 4, rng));

  BadMemory hidden(0.1, 10);
  hidden.insert(make_episode(1.0, 2));  // seen 1, visible 0
  CHECK_THROWS(sample_transitions(hidden, 4, rng));
}

TEST_CASE("jsonl dump emits one object per stored episode") {
  GoodMemory mem(3);
  mem.insert(make_episode(1.25, 2, 2, 1));
  mem.insert(make_episode(0.5, 1));
  std::ostringstream out;
  dump_jsonl(mem.entries(), out);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find("\"reward\"") != std::string::npos);
    CHECK(line.find("\"actions\"") != std::string::npos);
    ++count;
  }
  CHECK(count == 2);
}
