#include "debunkd/memory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace debunkd {

namespace {

bool better_good(const StoredEpisode& a, const StoredEpisode& b) {
  if (a.trace.reward != b.trace.reward) return a.trace.reward > b.trace.reward;
  return a.arrival < b.arrival;
}

bool better_bad(const StoredEpisode& a, const StoredEpisode& b) {
  if (a.trace.reward != b.trace.reward) return a.trace.reward < b.trace.reward;
  return a.arrival < b.arrival;
}

template <typename Cmp>
void sorted_insert(std::vector<StoredEpisode>& entries, StoredEpisode ep, int cap, Cmp cmp) {
  auto pos = std::upper_bound(entries.begin(), entries.end(), ep, cmp);
  entries.insert(pos, std::move(ep));
  if (static_cast<int>(entries.size()) > cap) entries.pop_back();
}

std::size_t steps_in(std::span<const StoredEpisode> entries) {
  std::size_t total = 0;
  for (const auto& e : entries) total += e.trace.steps.size();
  return total;
}

std::vector<const TraceStep*> sample_from(std::span<const StoredEpisode> entries, int batch,
                                          RngStream& rng) {
  const std::size_t total = steps_in(entries);
  if (total == 0) throw std::logic_error("sample_transitions: memory holds no steps");
  if (batch < 0) throw std::invalid_argument("sample_transitions: negative batch");
  std::vector<const TraceStep*> out;
  out.reserve(batch);
  for (int b = 0; b < batch; ++b) {
    std::size_t k = rng.below(total);
    for (const auto& e : entries) {
      if (k < e.trace.steps.size()) {
        out.push_back(&e.trace.steps[k]);
        break;
      }
      k -= e.trace.steps.size();
    }
  }
  return out;
}

}  // namespace

GoodMemory::GoodMemory(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("GoodMemory: capacity must be >= 1");
}

void GoodMemory::insert(EpisodeTrace episode) {
  if (!std::isfinite(episode.reward))
    throw std::invalid_argument("GoodMemory::insert: non-finite reward");
  sorted_insert(entries_, StoredEpisode{std::move(episode), seen_}, capacity_, better_good);
  ++seen_;
}

std::size_t GoodMemory::total_steps() const { return steps_in(entries_); }

BadMemory::BadMemory(double fraction, int cap) : fraction_(fraction), cap_(cap) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("BadMemory: fraction outside [0, 1]");
  if (cap < 1) throw std::invalid_argument("BadMemory: cap must be >= 1");
}

void BadMemory::insert(EpisodeTrace episode) {
  if (!std::isfinite(episode.reward))
    throw std::invalid_argument("BadMemory::insert: non-finite reward");
  sorted_insert(pool_, StoredEpisode{std::move(episode), seen_}, cap_, better_bad);
  ++seen_;
}

int BadMemory::size() const {
  const auto target = static_cast<std::uint64_t>(std::floor(fraction_ * static_cast<double>(seen_)));
  return static_cast<int>(std::min<std::uint64_t>({target, static_cast<std::uint64_t>(cap_),
                                                   static_cast<std::uint64_t>(pool_.size())}));
}

std::span<const StoredEpisode> BadMemory::entries() const {
  return {pool_.data(), static_cast<std::size_t>(size())};
}

std::size_t BadMemory::total_steps() const { return steps_in(entries()); }

std::vector<const TraceStep*> sample_transitions(const GoodMemory& memory, int batch,
                                                 RngStream& rng) {
  return sample_from(memory.entries(), batch, rng);
}

std::vector<const TraceStep*> sample_transitions(const BadMemory& memory, int batch,
                                                 RngStream& rng) {
  return sample_from(memory.entries(), batch, rng);
}

void dump_jsonl(std::span<const StoredEpisode> entries, std::ostream& out) {
  for (const auto& e : entries) {
    nlohmann::json j;
    j["arrival"] = e.arrival;
    j["reward"] = e.trace.reward;
    j["length"] = e.trace.steps.size();
    auto& actions = j["actions"] = nlohmann::json::array();
    for (const auto& s : e.trace.steps) actions.push_back(s.action);
    out << j.dump() << '\n';
  }
}

}  // namespace debunkd
