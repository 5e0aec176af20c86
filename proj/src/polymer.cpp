#include "loopcorr/polymer.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <cmath>
#include <numeric>
#include <sstream>

#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"

namespace loopcorr {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Sizes (touched nodes) of the connected components of an edge set.
std::vector<int> component_sizes(const TannerGraph& g, std::span<const int> edges, UnionFind& uf,
                                 std::vector<int>& touched_stamp, int stamp) {
  const int n = g.num_vars();
  std::vector<int> touched;
  for (int e : edges) {
    const int u = g.edge(e).var;
    const int v = n + g.edge(e).check;
    uf.unite(u, v);
    if (touched_stamp[u] != stamp) {
      touched_stamp[u] = stamp;
      touched.push_back(u);
    }
    if (touched_stamp[v] != stamp) {
      touched_stamp[v] = stamp;
      touched.push_back(v);
    }
  }
  std::vector<int> roots;
  std::vector<int> sizes;
  for (int u : touched) {
    const int root = uf.find(u);
    auto it = std::find(roots.begin(), roots.end(), root);
    if (it == roots.end()) {
      roots.push_back(root);
      sizes.push_back(1);
    } else {
      ++sizes[static_cast<std::size_t>(it - roots.begin())];
    }
  }
  return sizes;
}

void check_agreement(double a, double b, const char* what) {
  if (!relative_close(a, b, 1e-10)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": " << a << " vs " << b;
    throw Error(ErrorKind::ConsistencyFailure, os.str());
  }
}

}  // namespace

bool is_connected(const TannerGraph& g, const GeneralizedLoop& loop) {
  return decompose(g, loop).size() <= 1;
}

std::vector<Polymer> decompose(const TannerGraph& g, const GeneralizedLoop& loop) {
  if (loop.empty()) return {};
  const int n = g.num_vars();
  UnionFind uf(g.num_nodes());
  for (int e : loop.edges()) uf.unite(g.edge(e).var, n + g.edge(e).check);
  std::vector<int> roots;
  std::vector<std::vector<int>> parts;
  for (int e : loop.edges()) {
    const int root = uf.find(g.edge(e).var);
    auto it = std::find(roots.begin(), roots.end(), root);
    if (it == roots.end()) {
      roots.push_back(root);
      parts.push_back({e});
    } else {
      parts[static_cast<std::size_t>(it - roots.begin())].push_back(e);
    }
  }
  std::vector<Polymer> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(GeneralizedLoop::from_edges(g, std::move(p)));
  return out;
}

int small_size_limit(double lambda, int n) {
  return std::max(0, static_cast<int>(std::ceil(lambda * n - 1e-9)) - 1);
}

// --- types -------------------------------------------------------------------

int PolymerType::variables() const noexcept {
  return std::accumulate(n_by_degree.begin(), n_by_degree.end(), 0);
}
int PolymerType::checks() const noexcept {
  return std::accumulate(m_by_degree.begin(), m_by_degree.end(), 0);
}
int PolymerType::variable_half_edges() const noexcept {
  int s = 0;
  for (std::size_t d = 0; d < n_by_degree.size(); ++d) s += static_cast<int>(d) * n_by_degree[d];
  return s;
}
int PolymerType::check_half_edges() const noexcept {
  int s = 0;
  for (std::size_t d = 0; d < m_by_degree.size(); ++d) s += static_cast<int>(d) * m_by_degree[d];
  return s;
}

std::string PolymerType::key() const {
  std::ostringstream os;
  for (int s = 2; s <= l(); ++s) os << (s > 2 ? "," : "") << n_by_degree[s];
  os << '|';
  for (int t = 2; t <= r(); ++t) os << (t > 2 ? "," : "") << m_by_degree[t];
  return os.str();
}

PolymerType polymer_type(const GeneralizedLoop& loop, int l, int r) {
  PolymerType t{std::vector<int>(static_cast<std::size_t>(l) + 1, 0),
                std::vector<int>(static_cast<std::size_t>(r) + 1, 0)};
  for (const auto& [i, d] : loop.var_degrees()) {
    if (d > l) throw Error(ErrorKind::DomainError, "variable degree above l");
    ++t.n_by_degree[d];
  }
  for (const auto& [a, d] : loop.check_degrees()) {
    if (d > r) throw Error(ErrorKind::DomainError, "check degree above r");
    ++t.m_by_degree[d];
  }
  return t;
}

BoundConstants BoundConstants::defaults(int l, int r, double alpha_t, double alpha_r, double beta_s) {
  BoundConstants c;
  c.alpha.assign(static_cast<std::size_t>(r) + 1, 0.0);
  for (int t = 2; t < r; ++t) c.alpha[t] = alpha_t;
  c.alpha_r = alpha_r;
  c.beta.assign(static_cast<std::size_t>(l) + 1, 0.0);
  for (int s = 2; s <= l; ++s) c.beta[s] = beta_s;
  return c;
}

void BoundConstants::validate(int l, int r) const {
  if (alpha.size() < static_cast<std::size_t>(r) + 1 || beta.size() < static_cast<std::size_t>(l) + 1) {
    throw Error(ErrorKind::DomainError, "bound constants sized for smaller degrees");
  }
  for (int t = 2; t < r; ++t) {
    if (!(alpha[t] > 1.0)) throw Error(ErrorKind::DomainError, "alpha_t must exceed 1");
  }
  if (!(alpha_r > 0.0 && alpha_r < 1.0)) throw Error(ErrorKind::DomainError, "alpha_r not in (0,1)");
  for (int s = 2; s <= l; ++s) {
    if (!(beta[s] > 1.0)) throw Error(ErrorKind::DomainError, "beta_s must exceed 1");
  }
}

double activity_bound(const PolymerType& type, double h, const BoundConstants& consts) {
  const int l = type.l();
  const int r = type.r();
  if (h < 0.0) throw Error(ErrorKind::DomainError, "h must be nonnegative");
  consts.validate(l, r);
  const double top = 1.0 - consts.alpha_r * r * h * h;
  if (!(top > 0.0)) {
    std::ostringstream os;
    os << "alpha_r r h^2 = " << consts.alpha_r * r * h * h << " >= 1: bound invalid at h = " << h;
    throw Error(ErrorKind::DomainError, os.str());
  }
  double k = std::pow(top, type.m_by_degree[r]);
  for (int t = 2; t < r; ++t) {
    if (type.m_by_degree[t]) k *= std::pow(consts.alpha[t] * std::pow(h, r - t), type.m_by_degree[t]);
  }
  for (int s = 2; s <= l; ++s) {
    if (!type.n_by_degree[s]) continue;
    const double factor = (s % 2 == 0) ? 1.0 + consts.beta[s] / 2.0 * s * (s - 1) * h * h
                                       : consts.beta[s] * (s - 1) * h;
    k *= std::pow(factor, type.n_by_degree[s]);
  }
  return k;
}

double exponent_c(int l, int r, double kappa) {
  const double den = 3.0 - l * (1.0 - kappa);
  if (!(den > 0.0)) throw Error(ErrorKind::DomainError, "3 - l(1-kappa) must be positive");
  const double c = r - (2.0 + r) / den;
  if (!(c > 0.0)) {
    std::ostringstream os;
    os << "c = " << c << " <= 0: kappa = " << kappa << " at or below 1 - 2(r-1)/(lr)";
    throw Error(ErrorKind::DomainError, os.str());
  }
  return c;
}

PolymerBoundCheck check_polymer_bound(const TannerGraph& g, const Polymer& polymer,
                                      const ActivityTables& tables, double h, double c, double kappa) {
  const int l = g.max_var_degree();
  const int r = g.max_check_degree();
  const auto type = polymer_type(polymer, l, r);
  const int size = polymer.size();

  PolymerBoundCheck out;
  out.activity = std::fabs(tables.weight(polymer));
  out.activity_limit = std::pow(h, c * size / 2.0);
  out.activity_holds = out.activity <= out.activity_limit;

  for (int t = 2; t < r; ++t) out.degree_lhs += static_cast<double>(r - t) * type.m_by_degree[t];
  out.degree_rhs = c * size;
  out.degree_holds = out.degree_lhs >= out.degree_rhs;

  for (int t = 2; t < r; ++t) out.type_expansion_lhs += type.m_by_degree[t];
  for (int s = 2; s <= l; ++s) out.type_expansion_lhs += static_cast<double>(l - s) * type.n_by_degree[s];
  out.expansion_rhs = kappa * l * type.variables();
  out.type_expansion_holds = out.type_expansion_lhs >= out.expansion_rhs;

  std::vector<char> seen(static_cast<std::size_t>(g.num_checks()), 0);
  for (const auto& [i, d] : polymer.var_degrees()) {
    for (int a : g.var_neighbors(i)) {
      if (!seen[a]) {
        seen[a] = 1;
        ++out.boundary;
      }
    }
  }
  out.expansion_holds = out.boundary >= out.expansion_rhs;
  return out;
}

// --- weighted polymers, Q, Z_p, R ---------------------------------------------

bool WeightedPolymer::overlaps(const WeightedPolymer& other) const noexcept {
  for (std::size_t w = 0; w < node_bits.size(); ++w) {
    if (node_bits[w] & other.node_bits[w]) return true;
  }
  return false;
}

std::vector<WeightedPolymer> weigh_polymers(const TannerGraph& g, std::span<const Polymer> polymers,
                                            const ActivityTables& tables) {
  const std::size_t words = (static_cast<std::size_t>(g.num_nodes()) + 63) / 64;
  std::vector<WeightedPolymer> out;
  out.reserve(polymers.size());
  for (const auto& p : polymers) {
    WeightedPolymer w{p, tables.weight(p), p.nodes(g.num_vars()), std::vector<std::uint64_t>(words, 0)};
    for (int v : w.nodes) w.node_bits[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WeightedPolymer> small_polymers(const TannerGraph& g, const ActivityTables& tables,
                                            double lambda, const PolymerCaps& caps) {
  const auto polys = enumerate_small_polymers(g, small_size_limit(lambda, g.num_vars()), caps);
  return weigh_polymers(g, polys, tables);
}

BrydgesResult brydges_criterion(const TannerGraph& g, std::span<const WeightedPolymer> polymers,
                                double zeta0) {
  std::vector<CompensatedSum> per_node(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& p : polymers) {
    const double term = std::exp(static_cast<double>(p.polymer.size())) * zeta0 * std::fabs(p.activity);
    for (int v : p.nodes) per_node[v].add(term);
  }
  BrydgesResult out;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const double q = per_node[v].value();
    if (q > out.q) {
      out.q = q;
      out.argmax_node = v;
    }
  }
  return out;
}

BrydgesResult brydges_criterion(const TannerGraph& g, std::span<const double> fields,
                                const MessageSet& msgs, double lambda, double zeta0,
                                const PolymerCaps& caps) {
  const ActivityTables tables(g, fields, msgs);
  const auto polys = small_polymers(g, tables, lambda, caps);
  return brydges_criterion(g, polys, zeta0);
}

std::vector<double> disjoint_polymer_sums(std::span<const WeightedPolymer> polymers,
                                          std::optional<int> max_cardinality,
                                          const PolymerCaps& caps) {
  const int limit = max_cardinality.value_or(static_cast<int>(polymers.size()));
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(limit) + 1);
  sums[0].add(1.0);
  if (polymers.empty() || limit == 0) return {1.0};

  const std::size_t words = polymers.front().node_bits.size();
  if (words == 1) {
    // Lowest undecided node is either left uncovered or covered by a polymer
    // whose smallest node it is; memoised on (node, occupied nodes above it).
    const int nodes = 64;
    std::vector<std::vector<std::size_t>> by_min(nodes);
    for (std::size_t j = 0; j < polymers.size(); ++j) {
      by_min[std::countr_zero(polymers[j].node_bits[0])].push_back(j);
    }
    int top = 0;
    for (int v = 0; v < nodes; ++v) {
      if (!by_min[v].empty()) top = v + 1;
    }
    using Poly = std::vector<long double>;
    std::vector<std::unordered_map<std::uint64_t, Poly>> memo(static_cast<std::size_t>(top) + 1);
    std::uint64_t work = 0;
    auto solve = [&](auto&& self, int v, std::uint64_t used) -> const Poly& {
      while (v < top && ((used >> v) & 1U || by_min[v].empty())) ++v;
      const std::uint64_t key = v < 64 ? used & (~std::uint64_t{0} << v) : 0;
      auto& slot = memo[static_cast<std::size_t>(v)];
      if (auto it = slot.find(key); it != slot.end()) return it->second;
      Poly acc{1.0L};
      if (v < top) {
        acc = self(self, v + 1, key);
        for (std::size_t j : by_min[v]) {
          const auto& p = polymers[j];
          if (key & p.node_bits[0]) continue;
          if (++work > caps.max_polymer_sets) {
            throw Error(ErrorKind::CapExceeded, "too many disjoint polymer sets");
          }
          const Poly& rest = self(self, v + 1, key | p.node_bits[0]);
          const std::size_t len = std::min<std::size_t>(rest.size() + 1, static_cast<std::size_t>(limit) + 1);
          if (acc.size() < len) acc.resize(len, 0.0L);
          for (std::size_t k = 0; k + 1 < len; ++k) acc[k + 1] += static_cast<long double>(p.activity) * rest[k];
        }
      }
      return slot.emplace(key, std::move(acc)).first->second;
    };
    const Poly result = solve(solve, 0, 0);
    std::vector<double> out(result.begin(), result.end());
    while (out.size() > 1 && out.back() == 0.0) out.pop_back();
    return out;
  }

  std::vector<std::uint64_t> used(words, 0);
  std::uint64_t visited = 0;

  // Depth-first over increasing polymer indices; each set is reached once.
  auto recurse = [&](auto&& self, std::size_t start, int depth, double product) -> void {
    for (std::size_t j = start; j < polymers.size(); ++j) {
      const auto& p = polymers[j];
      bool free = true;
      for (std::size_t w = 0; w < words && free; ++w) free = (used[w] & p.node_bits[w]) == 0;
      if (!free) continue;
      if (++visited > caps.max_polymer_sets) {
        throw Error(ErrorKind::CapExceeded, "too many disjoint polymer sets");
      }
      const double next = product * p.activity;
      sums[static_cast<std::size_t>(depth) + 1].add(next);
      if (depth + 1 < limit) {
        for (std::size_t w = 0; w < words; ++w) used[w] |= p.node_bits[w];
        self(self, j + 1, depth + 1, next);
        for (std::size_t w = 0; w < words; ++w) used[w] &= ~p.node_bits[w];
      }
    }
  };
  recurse(recurse, 0, 0, 1.0);

  std::vector<double> out;
  for (const auto& s : sums) out.push_back(s.value());
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

namespace {

struct LoopPartition {
  CompensatedSum all, small_only, large, large_abs, large_bound;
  std::uint64_t loops = 0;
};

LoopPartition partition_loops(const TannerGraph& g, const ActivityTables& tables, double lambda,
                              const std::optional<BoundSpec>& bound, const LoopCaps& caps) {
  const int limit = small_size_limit(lambda, g.num_vars());
  const int l = g.max_var_degree();
  const int r = g.max_check_degree();
  LoopPartition out;
  UnionFind uf(g.num_nodes());
  std::vector<int> stamp(static_cast<std::size_t>(g.num_nodes()), 0);
  int epoch = 0;
  std::vector<std::pair<int, int>> vd, cd;

  for_each_generalized_loop(
      g,
      [&](const LoopState& s) {
        ++out.loops;
        const double k = tables.weight(s);
        out.all.add(k);
        uf = UnionFind(g.num_nodes());
        const auto sizes = component_sizes(g, s.edges, uf, stamp, ++epoch);
        const bool has_large = std::any_of(sizes.begin(), sizes.end(), [&](int z) { return z > limit; });
        if (!has_large) {
          out.small_only.add(k);
          return;
        }
        out.large.add(k);
        out.large_abs.add(std::fabs(k));
        if (bound) {
          PolymerType t{std::vector<int>(static_cast<std::size_t>(l) + 1, 0),
                        std::vector<int>(static_cast<std::size_t>(r) + 1, 0)};
          for (std::size_t i = 0; i < s.var_degree.size(); ++i) {
            if (s.var_degree[i]) ++t.n_by_degree[s.var_degree[i]];
          }
          for (std::size_t a = 0; a < s.check_degree.size(); ++a) {
            if (s.check_degree[a]) ++t.m_by_degree[s.check_degree[a]];
          }
          out.large_bound.add(activity_bound(t, bound->h, bound->constants));
        }
      },
      LoopEnumeration::Dfs, caps);
  return out;
}

}  // namespace

SmallPolymerPartition small_polymer_partition(const TannerGraph& g, std::span<const double> fields,
                                              const MessageSet& msgs, double lambda,
                                              const PolymerCaps& caps) {
  const ActivityTables tables(g, fields, msgs);
  const auto polys = small_polymers(g, tables, lambda, caps);

  SmallPolymerPartition out;
  out.polymer_count = polys.size();
  out.by_cardinality = disjoint_polymer_sums(polys, std::nullopt, caps);
  CompensatedSum rest;
  for (std::size_t k = 1; k < out.by_cardinality.size(); ++k) rest.add(out.by_cardinality[k]);
  out.z_p_minus_one = rest.value();
  out.via_polymer_sets = 1.0 + out.z_p_minus_one;
  out.z_p = out.via_polymer_sets;

  const auto parts = partition_loops(g, tables, lambda, std::nullopt, caps.loops);
  out.via_loops = parts.small_only.value();
  check_agreement(out.via_loops, out.via_polymer_sets, "Z_p by loops vs by polymer sets");
  return out;
}

LargePolymerRemainder large_polymer_remainder(const TannerGraph& g, std::span<const double> fields,
                                              const MessageSet& msgs, double lambda,
                                              const std::optional<BoundSpec>& bound,
                                              const PolymerCaps& caps) {
  const ActivityTables tables(g, fields, msgs);
  const auto polys = small_polymers(g, tables, lambda, caps);
  const auto sums = disjoint_polymer_sums(polys, std::nullopt, caps);
  CompensatedSum zp;
  for (double s : sums) zp.add(s);

  const auto parts = partition_loops(g, tables, lambda, bound, caps.loops);
  LargePolymerRemainder out;
  out.loop_sum = parts.all.value();
  out.z_p = zp.value();
  out.direct = parts.large.value();
  out.via_difference = out.loop_sum - out.z_p;
  out.abs_sum = parts.large_abs.value();
  if (bound) out.bound_sum = parts.large_bound.value();
  if (std::fabs(out.direct - out.via_difference) >
      1e-10 * std::max({1.0, std::fabs(out.loop_sum), std::fabs(out.z_p)})) {
    std::ostringstream os;
    os.precision(17);
    os << "R direct " << out.direct << " vs loop sum - Z_p " << out.via_difference;
    throw Error(ErrorKind::ConsistencyFailure, os.str());
  }
  return out;
}

TypeCensus type_census(const TannerGraph& g, std::optional<double> lambda,
                       const std::optional<BoundSpec>& bound, const LoopCaps& caps) {
  const int l = g.max_var_degree();
  const int r = g.max_check_degree();
  TypeCensus out;
  for_each_generalized_loop(
      g,
      [&](const LoopState& s) {
        if (s.edges.empty()) return;
        PolymerType t{std::vector<int>(static_cast<std::size_t>(l) + 1, 0),
                      std::vector<int>(static_cast<std::size_t>(r) + 1, 0)};
        for (int d : s.var_degree) {
          if (d) ++t.n_by_degree[d];
        }
        for (int d : s.check_degree) {
          if (d) ++t.m_by_degree[d];
        }
        ++out.counts[t];
        ++out.nonempty_loops;
      },
      LoopEnumeration::Dfs, caps);

  if (lambda) {
    const double threshold = *lambda * g.num_vars();
    for (const auto& [t, count] : out.counts) {
      const bool in_delta = threshold <= t.size() + 1e-9 &&
                            t.variable_half_edges() == t.check_half_edges() &&
                            t.variables() < g.num_vars() && t.checks() < g.num_checks();
      if (in_delta) out.in_domain[t] = count;
    }
    if (bound) {
      CompensatedSum rhs;
      for (const auto& [t, count] : out.in_domain) {
        rhs.add(activity_bound(t, bound->h, bound->constants) * static_cast<double>(count));
      }
      out.markov_rhs = rhs.value();
    }
  }
  return out;
}

}  // namespace loopcorr
