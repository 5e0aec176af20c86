#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopcorr/gf2.hpp"

namespace loopcorr {

struct Edge {
  int var = 0;
  int check = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable bipartite graph between n variable nodes and m check nodes.
///
/// Edges are identified by their index in the (var, check)-sorted edge list,
/// so the edges of variable i occupy a contiguous id range. Message sets and
/// loops address edges by these ids.
///
/// General (irregular) graphs are representable for oracle tests; the
/// ensemble pipeline uses is_biregular() to enforce the (l,r) structure.
class TannerGraph {
 public:
  TannerGraph() = default;

  /// Throws Error(InfeasibleParameters) on out-of-range endpoints or
  /// parallel edges.
  static TannerGraph from_edges(int num_vars, int num_checks, std::vector<Edge> edges);

  int num_vars() const noexcept { return n_; }
  int num_checks() const noexcept { return m_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  int num_nodes() const noexcept { return n_ + m_; }

  const Edge& edge(int e) const noexcept { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Edge ids incident to variable i, ordered by check index.
  std::span<const int> var_edges(int i) const noexcept;
  /// Edge ids incident to check a, ordered by variable index.
  std::span<const int> check_edges(int a) const noexcept;

  int var_degree(int i) const noexcept { return var_off_[i + 1] - var_off_[i]; }
  int check_degree(int a) const noexcept { return check_off_[a + 1] - check_off_[a]; }

  std::vector<int> var_neighbors(int i) const;
  std::vector<int> check_neighbors(int a) const;

  /// Maximum variable / check degree (l, r for a biregular graph).
  int max_var_degree() const noexcept { return max_var_deg_; }
  int max_check_degree() const noexcept { return max_check_deg_; }
  bool is_biregular() const noexcept;

  /// Same graph with variable i renamed var_perm[i] and check a renamed
  /// check_perm[a].
  TannerGraph relabeled(std::span<const int> var_perm, std::span<const int> check_perm) const;

  friend bool operator==(const TannerGraph& a, const TannerGraph& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  int max_var_deg_ = 0;
  int max_check_deg_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> var_off_{0};
  std::vector<int> check_off_{0};
  std::vector<int> var_edge_ids_;  // identity: edges are sorted by variable
  std::vector<int> check_edge_ids_;
};

/// Uniform draw from the simple (l,r)-biregular graphs on n variables:
/// configuration-model matching of the n*l stubs, the whole matching
/// rejected if any parallel edge appears.
TannerGraph generate_regular(int n, int l, int r, std::uint64_t seed,
                             std::uint64_t max_attempts = 1'000'000);

BinaryMatrix parity_check_matrix(const TannerGraph& g);

/// Each of `checks` check nodes adjacent to every one of n variables
/// (for n = 6, checks = 3 this is the (3,6) "triple-check" graph).
TannerGraph complete_bipartite(int n, int checks);

// --- expansion -------------------------------------------------------------

struct ExpanderResult {
  bool expander = true;
  std::optional<std::vector<int>> witness;  ///< violating variable subset
  std::uint64_t subsets_checked = 0;
};

/// Exhaustive check that every variable subset V with |V| < lambda*n has at
/// least kappa*l*|V| check neighbours (l = max variable degree). Refuses with
/// Error(CapExceeded) when more than `subset_cap` subsets would be needed.
ExpanderResult is_expander(const TannerGraph& g, double lambda, double kappa,
                           std::uint64_t subset_cap = 10'000'000);

/// Largest s such that every variable subset of size <= s expands by kappa
/// (0 if some single variable fails), searching sizes up to max_size. The
/// cap applies to the sizes actually reached.
int largest_expanding_size(const TannerGraph& g, double kappa, int max_size,
                           std::uint64_t subset_cap = 10'000'000);

struct Lambda0Options {
  std::size_t grid_points = 1'000'000;
  double epsilon = 1e-9;
  /// Logarithm base of the binary entropy (the root does not depend on it).
  double entropy_base = 2.718281828459045;
};

struct Lambda0Result {
  double lambda0 = 0.0;
  double residual = 0.0;
  std::optional<std::string> warning;
};

/// Smallest root of f on [lo, hi] found by scanning grid_points uniform
/// points for a sign change and bisecting the first bracket to machine
/// precision. nullopt when no sign change is seen.
std::optional<double> first_root_by_scan(const std::function<double(double)>& f, double lo,
                                         double hi, std::size_t grid_points);

/// First-moment expansion equation
///   (l-1)/l h2(x) - (1/r) h2(x k r) - x k r h2(1/(k r)) = 0.
double lambda0_equation(int l, int r, double kappa, double x,
                        double entropy_base = 2.718281828459045);

/// Smallest positive root of lambda0_equation on (eps, 1/(kappa r) - eps),
/// located by a uniform sign-change scan followed by bisection.
Lambda0Result solve_lambda0(int l, int r, double kappa, const Lambda0Options& opts = {});

/// Open interval of admissible expansion constants (1 - 2(r-1)/(l r), 1 - 1/l).
std::pair<double, double> admissible_kappa_interval(int l, int r);

// --- alist -----------------------------------------------------------------

std::string save_alist(const TannerGraph& g);
/// Parses a biregular graph; Error(ParseError) on malformed input.
TannerGraph load_alist(const std::string& text);

}  // namespace loopcorr
