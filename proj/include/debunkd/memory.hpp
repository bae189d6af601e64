#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "debunkd/env.hpp"
#include "debunkd/rng.hpp"

namespace debunkd {

struct StoredEpisode {
  EpisodeTrace trace;
  std::uint64_t arrival = 0;
};

// Top-K episodes by reward. On reward ties the earlier arrival is retained.
class GoodMemory {
 public:
  explicit GoodMemory(int capacity);

  void insert(EpisodeTrace episode);
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  std::uint64_t episodes_seen() const { return seen_; }
  // Sorted by (reward desc, arrival asc).
  const std::vector<StoredEpisode>& entries() const { return entries_; }
  std::size_t total_steps() const;

 private:
  int capacity_;
  std::uint64_t seen_ = 0;
  std::vector<StoredEpisode> entries_;
};

// Bottom fraction of all episodes seen so far, recomputed after each insert
// and capped. Internally the lowest `cap` episodes are retained so the
// visible window is exact even as floor(fraction * seen) grows.
class BadMemory {
 public:
  BadMemory(double fraction, int cap);

  void insert(EpisodeTrace episode);
  int size() const;  // visible entries: min(floor(fraction * seen), cap)
  double fraction() const { return fraction_; }
  int cap() const { return cap_; }
  std::uint64_t episodes_seen() const { return seen_; }
  // Sorted by (reward asc, arrival asc), truncated to size().
  std::span<const StoredEpisode> entries() const;
  std::size_t total_steps() const;

 private:
  double fraction_;
  int cap_;
  std::uint64_t seen_ = 0;
  std::vector<StoredEpisode> pool_;
};

// Uniform with-replacement draw over the union of all steps of the stored
// episodes. The memory must hold at least one step.
std::vector<const TraceStep*> sample_transitions(const GoodMemory& memory, int batch,
                                                 RngStream& rng);
std::vector<const TraceStep*> sample_transitions(const BadMemory& memory, int batch,
                                                 RngStream& rng);

// Debug dump: one JSON object per stored episode.
void dump_jsonl(std::span<const StoredEpisode> entries, std::ostream& out);

}  // namespace debunkd
