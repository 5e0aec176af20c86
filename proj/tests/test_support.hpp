#pragma once

#include <numeric>
#include <vector>

#include "loopcorr/rng.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr::testing {

struct Relabeling {
  std::vector<int> var_perm;
  std::vector<int> check_perm;
  TannerGraph graph;
  /// edge_map[e] is the id in `graph` of edge e of the original graph.
  std::vector<int> edge_map;
};

inline Relabeling random_relabeling(const TannerGraph& g, std::uint64_t seed) {
  Relabeling out;
  out.var_perm.resize(static_cast<std::size_t>(g.num_vars()));
  out.check_perm.resize(static_cast<std::size_t>(g.num_checks()));
  std::iota(out.var_perm.begin(), out.var_perm.end(), 0);
  std::iota(out.check_perm.begin(), out.check_perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(out.var_perm));
  rng.shuffle(std::span<int>(out.check_perm));
  out.graph = g.relabeled(out.var_perm, out.check_perm);
  for (int e = 0; e < g.num_edges(); ++e) {
    const int v = out.var_perm[g.edge(e).var];
    const int c = out.check_perm[g.edge(e).check];
    for (int f : out.graph.var_edges(v)) {
      if (out.graph.edge(f).check == c) out.edge_map.push_back(f);
    }
  }
  return out;
}

/// Small irregular graphs for oracle tests: chains, trees, single checks and
/// graphs with cycles of mixed degrees.
inline std::vector<TannerGraph> irregular_suite() {
  std::vector<TannerGraph> out;
  out.push_back(TannerGraph::from_edges(2, 1, {{0, 0}, {1, 0}}));
  out.push_back(TannerGraph::from_edges(4, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}}));
  out.push_back(TannerGraph::from_edges(3, 3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {0, 2}}));
  out.push_back(TannerGraph::from_edges(
      4, 3, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {3, 1}, {2, 2}, {3, 2}, {0, 2}}));
  out.push_back(TannerGraph::from_edges(
      5, 3, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}, {1, 1}, {4, 1}, {2, 2}, {3, 2}, {4, 2}}));
  out.push_back(TannerGraph::from_edges(
      5, 4, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 3}, {0, 3}, {2, 0}}));
  out.push_back(TannerGraph::from_edges(
      6, 4, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {3, 1}, {4, 1}, {4, 2}, {5, 2}, {0, 2}, {1, 3}, {3, 3}, {5, 3}}));
  out.push_back(TannerGraph::from_edges(
      6, 3, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {0, 2}, {1, 2}, {4, 2}, {5, 2}}));
  out.push_back(TannerGraph::from_edges(
      7, 4, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {3, 1}, {4, 1}, {1, 2}, {3, 2}, {5, 2}, {2, 3}, {4, 3}, {5, 3}, {6, 3}, {6, 0}}));
  out.push_back(TannerGraph::from_edges(
      5, 2, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {0, 1}, {1, 1}, {2, 1}}));
  out.push_back(TannerGraph::from_edges(
      6, 5, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 3}, {4, 4}, {5, 4}, {0, 4}, {3, 0}}));
  return out;
}

}  // namespace loopcorr::testing
