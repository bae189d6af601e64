#include "debunkd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace debunkd {

std::size_t SocialGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& adj : out_edges) m += adj.size();
  return m;
}

std::vector<int> SocialGraph::in_degrees() const {
  std::vector<int> din(n, 0);
  for (const auto& adj : out_edges)
    for (int v : adj) ++din[v];
  return din;
}

void finalize_derived(SocialGraph& g) {
  g.e.assign(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) g.e[i] = static_cast<double>(g.out_edges[i].size());
  const double emax = g.n ? *std::max_element(g.e.begin(), g.e.end()) : 0.0;
  g.c.assign(g.n, 1.0);
  g.x.assign(g.n, 1.0);
  if (emax > 0.0) {
    for (int i = 0; i < g.n; ++i) {
      g.c[i] = (g.e[i] / emax) * 9.0 + 1.0;
      g.x[i] = (g.e[i] / emax) * 2.0 + 1.0;
    }
  }
}

namespace {

// Deduplicate a multigraph edge list into sorted adjacency, dropping
// self-loops.
SocialGraph from_multi_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::set<int>> adj(n);
  for (const auto& [u, v] : edges)
    if (u != v) adj[u].insert(v);
  SocialGraph g;
  g.n = n;
  g.out_edges.resize(n);
  for (int i = 0; i < n; ++i) g.out_edges[i].assign(adj[i].begin(), adj[i].end());
  finalize_derived(g);
  return g;
}

}  // namespace

SocialGraph generate_scale_free(int n, double alpha, double beta, double gamma,
                                std::uint64_t seed, double delta_in,
                                double delta_out, GrowthStats* stats) {
  if (n < 1) throw std::invalid_argument("generate_scale_free: n must be >= 1");
  if (alpha < 0 || beta < 0 || gamma < 0 || delta_in < 0 || delta_out < 0)
    throw std::invalid_argument("generate_scale_free: negative parameter");
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
    throw std::invalid_argument("generate_scale_free: alpha + beta + gamma must equal 1");

  RngStream rng(seed, Stream::NetGrowth);

  // Seed graph: a directed cycle on min(n, 3) nodes (degenerate for n == 1).
  std::vector<std::pair<int, int>> edges;
  int cur_n = std::min(n, 3);
  for (int i = 0; i < cur_n && cur_n >= 2; ++i) edges.emplace_back(i, (i + 1) % cur_n);

  // Endpoint lists give O(1) preferential sampling on the multigraph:
  // P(node) proportional to degree + delta decomposes into a degree part
  // (uniform over endpoints) and a uniform-over-nodes part.
  std::vector<int> sources, targets;
  for (const auto& [u, v] : edges) {
    sources.push_back(u);
    targets.push_back(v);
  }

  auto pick = [&](const std::vector<int>& endpoints, double delta) {
    const double m = static_cast<double>(endpoints.size());
    const double r = rng.uniform() * (m + delta * cur_n);
    if (r < m) return endpoints[static_cast<std::size_t>(r)];
    const int idx = static_cast<int>((r - m) / delta);
    return std::min(idx, cur_n - 1);
  };

  while (cur_n < n) {
    const double r = rng.uniform();
    if (r < alpha) {
      const int w = pick(targets, delta_in);
      const int v = cur_n++;
      edges.emplace_back(v, w);
      sources.push_back(v);
      targets.push_back(w);
    } else if (r < alpha + beta) {
      const int v = pick(sources, delta_out);
      const int w = pick(targets, delta_in);
      edges.emplace_back(v, w);
      sources.push_back(v);
      targets.push_back(w);
    } else {
      const int v = pick(sources, delta_out);
      const int w = cur_n++;
      edges.emplace_back(v, w);
      sources.push_back(v);
      targets.push_back(w);
    }
  }

  if (stats) {
    stats->multi_in_degree.assign(n, 0);
    stats->multi_out_degree.assign(n, 0);
    for (const auto& [u, v] : edges) {
      ++stats->multi_out_degree[u];
      ++stats->multi_in_degree[v];
    }
    stats->multi_edges = edges.size();
  }

  return from_multi_edges(n, edges);
}

double scale_free_in_exponent(double alpha, double beta, double gamma,
                              double delta_in) {
  return 1.0 + (1.0 + delta_in * (alpha + gamma)) / (alpha + beta);
}

SocialGraph load_edge_list(const std::string& path, bool undirected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

  std::vector<std::pair<long long, long long>> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long a = 0, b = 0;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw std::runtime_error("load_edge_list: malformed line " +
                               std::to_string(line_no) + " in " + path);
    }
    raw.emplace_back(a, b);
  }
  if (raw.empty()) throw std::runtime_error("load_edge_list: empty edge list " + path);

  std::set<long long> ids;
  for (const auto& [a, b] : raw) {
    ids.insert(a);
    ids.insert(b);
  }
  std::map<long long, int> compact;
  int next = 0;
  for (long long id : ids) compact[id] = next++;

  std::vector<std::pair<int, int>> edges;
  for (const auto& [a, b] : raw) {
    edges.emplace_back(compact[a], compact[b]);
    if (undirected) edges.emplace_back(compact[b], compact[a]);
  }
  return from_multi_edges(next, edges);
}

SocialGraph ego_subgraph(const SocialGraph& g, int center, int radius) {
  if (center < 0 || center >= g.n)
    throw std::invalid_argument("ego_subgraph: center out of range");
  if (radius < 0) throw std::invalid_argument("ego_subgraph: negative radius");

  // BFS over the undirected view.
  std::vector<std::vector<int>> undirected(g.n);
  for (int u = 0; u < g.n; ++u)
    for (int v : g.out_edges[u]) {
      undirected[u].push_back(v);
      undirected[v].push_back(u);
    }

  std::vector<int> dist(g.n, -1);
  std::queue<int> frontier;
  dist[center] = 0;
  frontier.push(center);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    if (dist[u] == radius) continue;
    for (int v : undirected[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
  }

  std::vector<int> keep;
  for (int i = 0; i < g.n; ++i)
    if (dist[i] >= 0) keep.push_back(i);
  std::vector<int> remap(g.n, -1);
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) remap[keep[i]] = i;

  SocialGraph sub;
  sub.n = static_cast<int>(keep.size());
  sub.out_edges.resize(sub.n);
  for (int u : keep)
    for (int v : g.out_edges[u])
      if (remap[v] >= 0) sub.out_edges[remap[u]].push_back(remap[v]);
  for (auto& adj : sub.out_edges) std::sort(adj.begin(), adj.end());
  finalize_derived(sub);
  return sub;
}

void save_edge_list(const SocialGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot write " + path);
  out << "# directed edge list, " << g.n << " nodes, " << g.edge_count()
      << " edges; (u -> v) means v follows u\n";
  for (int u = 0; u < g.n; ++u)
    for (int v : g.out_edges[u]) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("save_edge_list: write failed " + path);
}

void save_metadata(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_metadata: cannot write " + path);
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("save_metadata: write failed " + path);
}

}  // namespace debunkd
