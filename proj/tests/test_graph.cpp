#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "debunkd/graph.hpp"

using namespace debunkd;

namespace {

std::set<std::pair<int, int>> edge_set(const SocialGraph& g) {
  std::set<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.out_edges[u]) edges.insert({u, v});
  return edges;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("scale-free generation at the default experiment size") {
  const SocialGraph g = generate_scale_free(1250, 0.05, 0.8, 0.15, 1);
  CHECK(g.n == 1250);

  std::size_t edges = 0;
  for (int u = 0; u < g.n; ++u) {
    CHECK(std::is_sorted(g.out_edges[u].begin(), g.out_edges[u].end()));
    CHECK(std::adjacent_find(g.out_edges[u].begin(), g.out_edges[u].end()) ==
          g.out_edges[u].end());  // no duplicate edges
    CHECK(!std::binary_search(g.out_edges[u].begin(), g.out_edges[u].end(), u));
    edges += g.out_edges[u].size();
  }
  CHECK(edges == g.edge_count());

  // follower counts, costs and midpoints follow exactly from the out-degrees
  double total_e = 0.0, emax = 0.0;
  for (int i = 0; i < g.n; ++i) {
    CHECK(g.e[i] == static_cast<double>(g.out_edges[i].size()));
    total_e += g.e[i];
    emax = std::max(emax, g.e[i]);
  }
  CHECK(total_e == static_cast<double>(edges));
  REQUIRE(emax > 0.0);
  for (int i = 0; i < g.n; ++i) {
    CHECK(g.c[i] == (g.e[i] / emax) * 9.0 + 1.0);
    CHECK(g.x[i] == (g.e[i] / emax) * 2.0 + 1.0);
    CHECK(g.c[i] >= 1.0);
    CHECK(g.c[i] <= 10.0);
    CHECK(g.x[i] >= 1.0);
    CHECK(g.x[i] <= 3.0);
  }
}

TEST_CASE("scale-free generation is a pure function of seed and parameters") {
  const SocialGraph a = generate_scale_free(400, 0.05, 0.8, 0.15, 7);
  const SocialGraph b = generate_scale_free(400, 0.05, 0.8, 0.15, 7);
  const SocialGraph c = generate_scale_free(400, 0.05, 0.8, 0.15, 8);
  CHECK(edge_set(a) == edge_set(b));
  CHECK(edge_set(a) != edge_set(c));
}

TEST_CASE("single-node generation degenerates cleanly") {
  const SocialGraph g = generate_scale_free(1, 0.05, 0.8, 0.15, 3);
  CHECK(g.n == 1);
  CHECK(g.edge_count() == 0);
  CHECK(g.e == std::vector<double>{0.0});
  CHECK(g.c == std::vector<double>{1.0});
  CHECK(g.x == std::vector<double>{1.0});
}

TEST_CASE("generation rejects bad parameters") {
  CHECK_THROWS(generate_scale_free(0, 0.05, 0.8, 0.15, 1));
  CHECK_THROWS(generate_scale_free(10, 0.3, 0.3, 0.3, 1));
  CHECK_THROWS(generate_scale_free(10, -0.1, 0.9, 0.2, 1));
}

TEST_CASE("in-degree tail slope matches the growth model's exponent") {
  // The closed-form exponent describes the growth process, so the fit uses
  // the multigraph counts; duplicate removal deflates hub in-degrees.
  const double alpha = 0.05, beta = 0.8, gamma = 0.15, delta_in = 0.2;
  GrowthStats stats;
  const SocialGraph g =
      generate_scale_free(10000, alpha, beta, gamma, 42, delta_in, 0.0, &stats);

  const auto& din = stats.multi_in_degree;
  const int n = g.n;

  // log-log least squares on the complementary CDF of the in-degrees
  std::map<int, int> hist;
  for (int d : din) ++hist[d];
  std::vector<double> lx, ly;
  int at_least = n;
  for (const auto& [k, count] : hist) {
    if (k >= 4 && at_least >= 10) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(static_cast<double>(at_least) / n));
    }
    at_least -= count;
  }
  REQUIRE(lx.size() >= 5);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double m = static_cast<double>(lx.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double fitted_exponent = 1.0 - slope;  // ccdf ~ k^{-(exponent-1)}
  const double expected = scale_free_in_exponent(alpha, beta, gamma, delta_in);
  CHECK(std::abs(fitted_exponent - expected) <= 0.3);
}

TEST_CASE("edge list: undirected path graph") {
  const auto path = temp_file("dbk_path.txt", "0 1\n1 2\n");
  const SocialGraph g = load_edge_list(path, true);
  CHECK(g.n == 3);
  CHECK(g.edge_count() == 4);
  CHECK(g.e == std::vector<double>{1.0, 2.0, 1.0});
}

TEST_CASE("edge list: duplicates dropped, comments skipped") {
  const auto path = temp_file("dbk_dup.txt", "# a comment\n0 1\n0 1\n");
  const SocialGraph g = load_edge_list(path, false);
  CHECK(g.n == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.out_edges[0] == std::vector<int>{1});
}

TEST_CASE("edge list: raw ids are compacted in ascending order") {
  const auto path = temp_file("dbk_ids.txt", "100 7\n7 3\n");
  const SocialGraph g = load_edge_list(path, false);
  CHECK(g.n == 3);  // ids {3, 7, 100} -> {0, 1, 2}
  CHECK(g.out_edges[2] == std::vector<int>{1});
  CHECK(g.out_edges[1] == std::vector<int>{0});
}

TEST_CASE("edge list: errors carry the line number") {
  const auto path = temp_file("dbk_bad.txt", "0 1\nnot an edge\n");
  try {
    load_edge_list(path, false);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  const auto empty = temp_file("dbk_empty.txt", "# only comments\n");
  CHECK_THROWS(load_edge_list(empty, false));
  CHECK_THROWS(load_edge_list("/nonexistent/file.txt", false));
}

TEST_CASE("edge list parse agrees with an independent reference parser") {
  // snap-style file: comments, shuffled ids, duplicates
  const std::string body =
      "# nodes: irregular ids\n"
      "12 4\n4 12\n9 4\n12 9\n12 4\n7 7\n4 1\n";
  const auto path = temp_file("dbk_snap.txt", body);
  const SocialGraph g = load_edge_list(path, true);

  // reference parse: sets only, symmetrize, drop self loops
  std::set<long long> ids;
  std::set<std::pair<long long, long long>> ref_edges;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      long long a, b;
      std::sscanf(line.c_str(), "%lld %lld", &a, &b);
      ids.insert(a);
      ids.insert(b);
      if (a != b) {
        ref_edges.insert({a, b});
        ref_edges.insert({b, a});
      }
    }
  }
  CHECK(g.n == static_cast<int>(ids.size()));
  CHECK(g.edge_count() == ref_edges.size());
}

TEST_CASE("ego subgraph: radius 0 and whole graph") {
  const SocialGraph g = generate_scale_free(60, 0.05, 0.8, 0.15, 5);
  const SocialGraph zero = ego_subgraph(g, 3, 0);
  CHECK(zero.n == 1);
  CHECK(zero.edge_count() == 0);

  const SocialGraph all = ego_subgraph(g, 0, g.n);  // radius >= diameter
  // node 0 belongs to the seed cycle, so its component holds every
  // preferentially attached node reachable through it
  CHECK(all.n <= g.n);
  CHECK(ego_subgraph(g, 0, g.n).n == all.n);

  CHECK_THROWS(ego_subgraph(g, g.n, 1));
  CHECK_THROWS(ego_subgraph(g, -1, 1));
}

TEST_CASE("ego subgraph: star graph viewed from a leaf") {
  // hub 0 posts to leaves 1..6; radius 1 from a leaf spans the whole star
  SocialGraph star;
  star.n = 7;
  star.out_edges.resize(7);
  for (int leaf = 1; leaf < 7; ++leaf) star.out_edges[0].push_back(leaf);
  finalize_derived(star);

  const SocialGraph sub = ego_subgraph(star, 3, 1);
  CHECK(sub.n == 2);  // the leaf and the hub
  const SocialGraph sub2 = ego_subgraph(star, 3, 2);
  CHECK(sub2.n == 7);
}

TEST_CASE("ego subgraph matches a brute-force BFS oracle") {
  const SocialGraph g = generate_scale_free(120, 0.1, 0.7, 0.2, 11);
  for (const int center : {0, 5, 77}) {
    for (const int radius : {1, 2, 3}) {
      const SocialGraph sub = ego_subgraph(g, center, radius);

      // oracle: undirected BFS with explicit distance bound
      std::vector<int> dist(g.n, -1);
      std::queue<int> q;
      dist[center] = 0;
      q.push(center);
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < g.n; ++v) {
          const bool adjacent =
              std::binary_search(g.out_edges[u].begin(), g.out_edges[u].end(), v) ||
              std::binary_search(g.out_edges[v].begin(), g.out_edges[v].end(), u);
          if (adjacent && dist[v] < 0 && dist[u] < radius) {
            dist[v] = dist[u] + 1;
            q.push(v);
          }
        }
      }
      std::vector<int> expected_nodes;
      for (int i = 0; i < g.n; ++i)
        if (dist[i] >= 0) expected_nodes.push_back(i);
      CHECK(sub.n == static_cast<int>(expected_nodes.size()));

      std::size_t expected_edges = 0;
      for (int u : expected_nodes)
        for (int v : g.out_edges[u])
          if (dist[v] >= 0) ++expected_edges;
      CHECK(sub.edge_count() == expected_edges);
    }
  }
}

TEST_CASE("graph dump round-trips through the edge-list loader") {
  const SocialGraph g = generate_scale_free(80, 0.05, 0.8, 0.15, 9);
  const auto dir = std::filesystem::temp_directory_path();
  const auto edges_path = (dir / "dbk_dump.edges").string();
  save_edge_list(g, edges_path);
  save_metadata((dir / "dbk_dump.meta").string(), {{"n", "80"}, {"seed", "9"}});

  const SocialGraph back = load_edge_list(edges_path, false);
  CHECK(back.n == g.n);
  CHECK(edge_set(back) == edge_set(g));

  std::ifstream meta(dir / "dbk_dump.meta");
  std::string line;
  std::getline(meta, line);
  CHECK(line == "n=80");
}
