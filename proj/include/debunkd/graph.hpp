#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "debunkd/rng.hpp"

namespace debunkd {

// Directed follower network. An edge (u -> v) means "v follows u": v receives
// every item u posts. Under this convention e_i (the follower count of i) is
// the out-degree of i.
struct SocialGraph {
  int n = 0;
  std::vector<std::vector<int>> out_edges;  // sorted, no self-loops, no duplicates
  std::vector<double> e;  // follower counts, e[i] == out_edges[i].size()
  std::vector<double> c;  // selection costs, (e_i/max e)*9 + 1, in [1, 10]
  std::vector<double> x;  // logistic midpoints, (e_i/max e)*2 + 1, in [1, 3]

  std::size_t edge_count() const;
  std::vector<int> in_degrees() const;
};

// Recompute e, c and x from out_edges. When every degree is zero the cost and
// midpoint fall back to their lower bounds (the formulas divide by max e).
void finalize_derived(SocialGraph& g);

// Degree sequences of the raw growth multigraph, before self-loops and
// duplicate edges are dropped. The published degree-exponent results describe
// these counts, so tail checks fit here.
struct GrowthStats {
  std::vector<int> multi_in_degree;
  std::vector<int> multi_out_degree;
  std::size_t multi_edges = 0;
};

// Directed scale-free growth (Bollobas et al. alpha/beta/gamma process).
// Self-loops and duplicate edges produced by the process are dropped after
// growth. delta_in/delta_out are the attachment offsets of the model.
SocialGraph generate_scale_free(int n, double alpha, double beta, double gamma,
                                std::uint64_t seed, double delta_in = 0.2,
                                double delta_out = 0.0, GrowthStats* stats = nullptr);

// Theoretical power-law exponent of the in-degree distribution for the
// growth process above.
double scale_free_in_exponent(double alpha, double beta, double gamma,
                              double delta_in);

// Parse a whitespace-separated "src dst" edge list ('#' lines are comments).
// Ids are compacted to 0..n-1 in ascending order of the raw ids. Duplicate
// edges and self-loops are dropped; with `undirected` each line yields both
// directions.
SocialGraph load_edge_list(const std::string& path, bool undirected);

// Induced subgraph on every node within `radius` undirected hops of `center`.
// Nodes keep their relative order; costs and midpoints are recomputed.
SocialGraph ego_subgraph(const SocialGraph& g, int center, int radius);

// Edge-list dump plus a key=value sidecar with generation metadata.
void save_edge_list(const SocialGraph& g, const std::string& path);
void save_metadata(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace debunkd
