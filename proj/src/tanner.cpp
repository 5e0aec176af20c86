#include "loopcorr/tanner.hpp"

#include <algorithm>
#include <numeric>

#include "loopcorr/error.hpp"
#include "loopcorr/rng.hpp"

namespace loopcorr {

TannerGraph TannerGraph::from_edges(int num_vars, int num_checks, std::vector<Edge> edges) {
  if (num_vars < 0 || num_checks < 0) {
    throw Error(ErrorKind::InfeasibleParameters, "negative node count");
  }
  for (const auto& e : edges) {
    if (e.var < 0 || e.var >= num_vars || e.check < 0 || e.check >= num_checks) {
      throw Error(ErrorKind::InfeasibleParameters,
                  "edge (" + std::to_string(e.var) + "," + std::to_string(e.check) +
                      ") out of range");
    }
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorKind::InfeasibleParameters, "parallel edge");
  }

  TannerGraph g;
  g.n_ = num_vars;
  g.m_ = num_checks;
  g.edges_ = std::move(edges);

  g.var_off_.assign(static_cast<std::size_t>(num_vars) + 1, 0);
  g.check_off_.assign(static_cast<std::size_t>(num_checks) + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.var_off_[e.var + 1];
    ++g.check_off_[e.check + 1];
  }
  std::partial_sum(g.var_off_.begin(), g.var_off_.end(), g.var_off_.begin());
  std::partial_sum(g.check_off_.begin(), g.check_off_.end(), g.check_off_.begin());

  g.var_edge_ids_.resize(g.edges_.size());
  std::iota(g.var_edge_ids_.begin(), g.var_edge_ids_.end(), 0);

  // Edges are sorted by variable, so filling in id order keeps each check's
  // list sorted by variable index.
  g.check_edge_ids_.assign(g.edges_.size(), 0);
  std::vector<int> fill(g.check_off_.begin(), g.check_off_.end() - 1);
  for (int e = 0; e < g.num_edges(); ++e) {
    g.check_edge_ids_[fill[g.edges_[e].check]++] = e;
  }

  for (int i = 0; i < num_vars; ++i) g.max_var_deg_ = std::max(g.max_var_deg_, g.var_degree(i));
  for (int a = 0; a < num_checks; ++a) {
    g.max_check_deg_ = std::max(g.max_check_deg_, g.check_degree(a));
  }
  return g;
}

std::span<const int> TannerGraph::var_edges(int i) const noexcept {
  return {var_edge_ids_.data() + var_off_[i], static_cast<std::size_t>(var_degree(i))};
}

std::span<const int> TannerGraph::check_edges(int a) const noexcept {
  return {check_edge_ids_.data() + check_off_[a], static_cast<std::size_t>(check_degree(a))};
}

std::vector<int> TannerGraph::var_neighbors(int i) const {
  std::vector<int> out;
  for (int e : var_edges(i)) out.push_back(edges_[e].check);
  return out;
}

std::vector<int> TannerGraph::check_neighbors(int a) const {
  std::vector<int> out;
  for (int e : check_edges(a)) out.push_back(edges_[e].var);
  return out;
}

bool TannerGraph::is_biregular() const noexcept {
  for (int i = 0; i < n_; ++i) {
    if (var_degree(i) != max_var_deg_) return false;
  }
  for (int a = 0; a < m_; ++a) {
    if (check_degree(a) != max_check_deg_) return false;
  }
  return true;
}

TannerGraph TannerGraph::relabeled(std::span<const int> var_perm,
                                   std::span<const int> check_perm) const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({var_perm[e.var], check_perm[e.check]});
  return from_edges(n_, m_, std::move(out));
}

TannerGraph generate_regular(int n, int l, int r, std::uint64_t seed,
                             std::uint64_t max_attempts) {
  if (n <= 0 || l < 2 || r < 1) {
    throw Error(ErrorKind::InfeasibleParameters, "need n > 0, l >= 2, r >= 1");
  }
  if ((static_cast<long long>(n) * l) % r != 0) {
    throw Error(ErrorKind::InfeasibleParameters,
                "n*l = " + std::to_string(n * l) + " not divisible by r = " + std::to_string(r));
  }
  if (r > n) throw Error(ErrorKind::InfeasibleParameters, "r > n");

  const int m = n * l / r;
  std::vector<int> stubs(static_cast<std::size_t>(n) * l);
  Rng rng(seed);
  std::vector<Edge> edges(stubs.size());
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t s = 0; s < stubs.size(); ++s) stubs[s] = static_cast<int>(s) / r;
    rng.shuffle(std::span<int>(stubs));
    for (std::size_t s = 0; s < stubs.size(); ++s) {
      edges[s] = {static_cast<int>(s) / l, stubs[s]};
    }
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      return TannerGraph::from_edges(n, m, std::move(sorted));
    }
  }
  throw Error(ErrorKind::RejectionBudgetExhausted,
              "no simple graph after " + std::to_string(max_attempts) + " matchings");
}

BinaryMatrix parity_check_matrix(const TannerGraph& g) {
  BinaryMatrix h(static_cast<std::size_t>(g.num_checks()), static_cast<std::size_t>(g.num_vars()));
  for (const auto& e : g.edges()) {
    h.set(static_cast<std::size_t>(e.check), static_cast<std::size_t>(e.var), true);
  }
  return h;
}

TannerGraph complete_bipartite(int n, int checks) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < checks; ++a) edges.push_back({i, a});
  }
  return TannerGraph::from_edges(n, checks, std::move(edges));
}

}  // namespace loopcorr
