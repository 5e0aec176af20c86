#include <algorithm>
#include <cstdint>
#include <vector>

#include "loopcorr/error.hpp"
#include "loopcorr/polymer.hpp"

namespace loopcorr {

namespace {

struct Enumerator {
  const TannerGraph& g;
  int max_size;
  const PolymerCaps& caps;
  int n;
  std::vector<std::vector<int>> adj;  // joint numbering
  std::vector<int> in_sub;            // membership count of the current node set
  std::vector<int> blocked;           // node is in the set or adjacent to it
  std::vector<int> sub;
  std::uint64_t node_sets = 0;
  std::vector<Polymer> out;

  // Scratch for the edge search inside one node set.
  std::vector<int> local_edges;
  std::vector<int> remaining;  // undecided incident local edges per node
  std::vector<int> degree;
  std::vector<int> chosen;

  Enumerator(const TannerGraph& graph, int limit, const PolymerCaps& c)
      : g(graph), max_size(limit), caps(c), n(graph.num_vars()) {
    const int total = g.num_nodes();
    adj.resize(static_cast<std::size_t>(total));
    for (int e = 0; e < g.num_edges(); ++e) {
      adj[g.edge(e).var].push_back(n + g.edge(e).check);
      adj[n + g.edge(e).check].push_back(g.edge(e).var);
    }
    in_sub.assign(static_cast<std::size_t>(total), 0);
    blocked.assign(static_cast<std::size_t>(total), 0);
    remaining.assign(static_cast<std::size_t>(total), 0);
    degree.assign(static_cast<std::size_t>(total), 0);
  }

  void run() {
    for (int v = 0; v < g.num_nodes(); ++v) {
      std::vector<int> ext;
      for (int u : adj[v]) {
        if (u > v) ext.push_back(u);
      }
      push(v);
      visit_set();
      extend(ext, v);
      pop(v);
    }
    std::sort(out.begin(), out.end());
  }

  void push(int v) {
    sub.push_back(v);
    in_sub[v] = 1;
    ++blocked[v];
    for (int u : adj[v]) ++blocked[u];
  }
  void pop(int v) {
    sub.pop_back();
    in_sub[v] = 0;
    --blocked[v];
    for (int u : adj[v]) --blocked[u];
  }

  // Each connected node set containing root as its minimum is produced once.
  void extend(std::vector<int> ext, int root) {
    if (static_cast<int>(sub.size()) >= max_size) return;
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext;
      for (int u : adj[w]) {
        if (u > root && !blocked[u]) next.push_back(u);
      }
      push(w);
      visit_set();
      extend(std::move(next), root);
      pop(w);
    }
  }

  void visit_set() {
    if (++node_sets > caps.max_node_sets) {
      throw Error(ErrorKind::CapExceeded, "too many connected node sets");
    }
    if (sub.size() < 4) return;
    int vars = 0;
    for (int v : sub) {
      int inside = 0;
      for (int u : adj[v]) inside += in_sub[u];
      if (inside < 2) return;
      vars += v < n;
    }
    if (vars < 2 || vars == static_cast<int>(sub.size()) - 1) return;

    local_edges.clear();
    for (int v : sub) {
      if (v >= n) continue;
      for (int e : g.var_edges(v)) {
        if (in_sub[n + g.edge(e).check]) local_edges.push_back(e);
      }
    }
    for (int v : sub) {
      remaining[v] = 0;
      degree[v] = 0;
    }
    for (int e : local_edges) {
      ++remaining[g.edge(e).var];
      ++remaining[n + g.edge(e).check];
    }
    chosen.clear();
    choose(0);
  }

  void choose(std::size_t k) {
    if (k == local_edges.size()) {
      if (connected()) {
        if (out.size() >= caps.max_polymers) throw Error(ErrorKind::CapExceeded, "too many polymers");
        out.push_back(GeneralizedLoop::from_edges(g, chosen));
      }
      return;
    }
    const int e = local_edges[k];
    const int u = g.edge(e).var;
    const int v = n + g.edge(e).check;
    --remaining[u];
    --remaining[v];
    // Every node of the set must end with degree >= 2.
    if (degree[u] + remaining[u] >= 2 && degree[v] + remaining[v] >= 2) choose(k + 1);
    ++degree[u];
    ++degree[v];
    chosen.push_back(e);
    choose(k + 1);
    chosen.pop_back();
    --degree[u];
    --degree[v];
    ++remaining[u];
    ++remaining[v];
  }

  bool connected() {
    std::vector<std::vector<int>> nb(sub.size());
    auto index = [&](int node) {
      return static_cast<std::size_t>(std::find(sub.begin(), sub.end(), node) - sub.begin());
    };
    for (int e : chosen) {
      const std::size_t a = index(g.edge(e).var);
      const std::size_t b = index(n + g.edge(e).check);
      nb[a].push_back(static_cast<int>(b));
      nb[b].push_back(static_cast<int>(a));
    }
    std::vector<char> mark(sub.size(), 0);
    mark[0] = 1;
    std::vector<int> todo{0};
    std::size_t reached = 1;
    while (!todo.empty()) {
      const int x = todo.back();
      todo.pop_back();
      for (int y : nb[static_cast<std::size_t>(x)]) {
        if (!mark[static_cast<std::size_t>(y)]) {
          mark[static_cast<std::size_t>(y)] = 1;
          ++reached;
          todo.push_back(y);
        }
      }
    }
    return reached == sub.size();
  }
};

}  // namespace

std::vector<Polymer> enumerate_small_polymers(const TannerGraph& g, int max_size, const PolymerCaps& caps) {
  if (max_size < 4) return {};
  Enumerator en(g, max_size, caps);
  en.run();
  return std::move(en.out);
}

}  // namespace loopcorr
