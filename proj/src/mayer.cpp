#include "loopcorr/mayer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"

namespace loopcorr {

namespace {

constexpr int kMaxVertices = 5;

void check_vertices(int vertices) {
  if (vertices < 1 || vertices > kMaxVertices) {
    throw Error(ErrorKind::DomainError, "Mayer graphs supported for 1..5 vertices");
  }
}

std::vector<std::pair<int, int>> vertex_pairs(int vertices) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < vertices; ++a) {
    for (int b = a + 1; b < vertices; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

bool spans_connected(int vertices, const std::vector<std::pair<int, int>>& pairs, std::uint32_t mask) {
  std::uint32_t reached = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!(mask >> k & 1U)) continue;
      const auto [a, b] = pairs[k];
      const bool ia = reached >> a & 1U;
      const bool ib = reached >> b & 1U;
      if (ia != ib) {
        reached |= (1U << a) | (1U << b);
        grew = true;
      }
    }
  }
  return reached == (1U << vertices) - 1;
}

}  // namespace

std::vector<MayerGraph> connected_mayer_graphs(int vertices) {
  check_vertices(vertices);
  const auto pairs = vertex_pairs(vertices);
  std::vector<MayerGraph> out;
  for (std::uint32_t mask = 0; mask < (1U << pairs.size()); ++mask) {
    if (!spans_connected(vertices, pairs, mask)) continue;
    MayerGraph g{vertices, {}};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1U) g.edges.push_back(pairs[k]);
    }
    out.push_back(std::move(g));
  }
  return out;
}

UrsellTable::UrsellTable(int vertices) : vertices_(vertices) {
  check_vertices(vertices);
  const auto pairs = vertex_pairs(vertices);
  pair_index_.assign(static_cast<std::size_t>(vertices * vertices), -1);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pair_index_[pairs[k].first * vertices + pairs[k].second] = static_cast<int>(k);
    pair_index_[pairs[k].second * vertices + pairs[k].first] = static_cast<int>(k);
  }
  const std::uint32_t full = 1U << pairs.size();
  std::vector<char> connected(full);
  for (std::uint32_t m = 0; m < full; ++m) connected[m] = spans_connected(vertices, pairs, m);
  phi_.assign(full, 0.0);
  for (std::uint32_t h = 0; h < full; ++h) {
    if (!connected[h]) continue;
    long long sum = 0;
    // Submasks of h, including h itself and the empty set.
    for (std::uint32_t s = h;; s = (s - 1) & h) {
      if (connected[s]) sum += (std::popcount(s) % 2 == 0) ? 1 : -1;
      if (s == 0) break;
    }
    phi_[h] = static_cast<double>(sum);
  }
}

int UrsellTable::pair_index(int a, int b) const noexcept { return pair_index_[a * vertices_ + b]; }

std::vector<double> log_series_coefficients(std::span<const double> a, int max_order) {
  auto coeff = [&](int k) { return k < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(k)] : 0.0; };
  std::vector<double> c(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (int k = 1; k <= max_order; ++k) {
    CompensatedSum s;
    for (int j = 1; j < k; ++j) s.add(j * c[j] * coeff(k - j));
    c[k] = coeff(k) - s.value() / k;
  }
  c.erase(c.begin());
  return c;
}

MayerExpansion mayer_truncated(const TannerGraph& g, std::span<const WeightedPolymer> polymers,
                               int max_order, const PolymerCaps& caps) {
  check_vertices(max_order);
  const double n = g.num_vars();
  MayerExpansion out;
  out.polymer_count = polymers.size();

  // Components of the polymer overlap graph; a cluster lies inside one.
  const std::size_t p = polymers.size();
  std::vector<std::vector<char>> overlap(p, std::vector<char>(p, 0));
  std::vector<int> comp(p, -1);
  int comps = 0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) overlap[i][j] = overlap[j][i] = polymers[i].overlaps(polymers[j]);
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<std::size_t> todo{i};
    comp[i] = comps;
    while (!todo.empty()) {
      const std::size_t x = todo.back();
      todo.pop_back();
      for (std::size_t y = 0; y < p; ++y) {
        if (overlap[x][y] && comp[y] < 0) {
          comp[y] = comps;
          todo.push_back(y);
        }
      }
    }
    ++comps;
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(comps));
  for (std::size_t i = 0; i < p; ++i) members[comp[i]].push_back(i);

  std::vector<UrsellTable> ursell;
  for (int m = 1; m <= max_order; ++m) ursell.emplace_back(m);

  std::vector<CompensatedSum> sums(static_cast<std::size_t>(max_order));
  std::vector<CompensatedSum> abs_sums(static_cast<std::size_t>(max_order));
  std::vector<std::size_t> tuple;
  std::uint64_t visited = 0;

  // Multisets j_1 <= ... <= j_M; each carries weight 1/prod(mult!) so that
  // (1/M!) * ordered sum = sum over multisets.
  for (const auto& group : members) {
    auto recurse = [&](auto&& self, std::size_t start, double product) -> void {
      const int m = static_cast<int>(tuple.size());
      if (m > 0) {
        if (++visited > caps.max_mayer_tuples) throw Error(ErrorKind::CapExceeded, "too many Mayer tuples");
        const UrsellTable& table = ursell[static_cast<std::size_t>(m) - 1];
        std::uint32_t mask = 0;
        for (int a = 0; a < m; ++a) {
          for (int b = a + 1; b < m; ++b) {
            if (overlap[tuple[a]][tuple[b]]) mask |= 1U << table.pair_index(a, b);
          }
        }
        const double phi = table(mask);
        if (phi != 0.0) {
          double mult = 1.0;
          int run = 1;
          for (int a = 1; a <= m; ++a) {
            if (a < m && tuple[a] == tuple[a - 1]) {
              mult *= ++run;
            } else {
              run = 1;
            }
          }
          sums[static_cast<std::size_t>(m) - 1].add(phi * product / mult);
          abs_sums[static_cast<std::size_t>(m) - 1].add(std::fabs(phi * product / mult));
          ++out.clusters;
        }
      }
      if (m == max_order) return;
      for (std::size_t k = start; k < group.size(); ++k) {
        tuple.push_back(group[k]);
        self(self, k, product * polymers[group[k]].activity);
        tuple.pop_back();
      }
    };
    recurse(recurse, 0, 1.0);
  }

  const auto a = disjoint_polymer_sums(polymers, std::nullopt, caps);
  CompensatedSum zp_minus_one;
  for (std::size_t k = 1; k < a.size(); ++k) zp_minus_one.add(a[k]);
  out.target = std::log1p(zp_minus_one.value()) / n;
  const auto c = log_series_coefficients(a, max_order);

  double running = 0.0;
  double running_log = 0.0;
  for (int m = 0; m < max_order; ++m) {
    out.terms.push_back(sums[m].value() / n);
    running += out.terms.back();
    out.partial_sums.push_back(running);
    out.log_series_terms.push_back(c[m] / n);
    running_log += out.log_series_terms.back();
    out.log_series_partial_sums.push_back(running_log);
    out.errors.push_back(std::fabs(running - out.target));
  }
  for (int m = 0; m < max_order; ++m) {
    const double scale = std::max(abs_sums[m].value() / n, std::fabs(out.log_series_terms[m]));
    if (std::fabs(out.terms[m] - out.log_series_terms[m]) > 1e-9 * scale) {
      throw Error(ErrorKind::ConsistencyFailure, "Mayer term disagrees with the log-series coefficient");
    }
  }
  return out;
}

MayerExpansion mayer_truncated(const TannerGraph& g, std::span<const double> fields,
                               const MessageSet& msgs, double lambda, int max_order,
                               const PolymerCaps& caps) {
  const ActivityTables tables(g, fields, msgs);
  const auto polys = small_polymers(g, tables, lambda, caps);
  return mayer_truncated(g, polys, max_order, caps);
}

}  // namespace loopcorr
