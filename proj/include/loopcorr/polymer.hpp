#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopcorr/bp.hpp"
#include "loopcorr/loop_series.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

/// A connected generalized loop.
using Polymer = GeneralizedLoop;

bool is_connected(const TannerGraph& g, const GeneralizedLoop& loop);

/// Connected components of a loop's edge set, ordered by smallest edge id.
std::vector<Polymer> decompose(const TannerGraph& g, const GeneralizedLoop& loop);

/// Largest node count s with s < lambda * n.
int small_size_limit(double lambda, int n);

// --- types and bounds -------------------------------------------------------

/// Induced-degree census: n_s for s = 2..l, m_t for t = 2..r. Vectors are
/// indexed by degree (entries 0 and 1 are always zero).
struct PolymerType {
  std::vector<int> n_by_degree;
  std::vector<int> m_by_degree;

  int l() const noexcept { return static_cast<int>(n_by_degree.size()) - 1; }
  int r() const noexcept { return static_cast<int>(m_by_degree.size()) - 1; }
  int variables() const noexcept;
  int checks() const noexcept;
  int size() const noexcept { return variables() + checks(); }
  int variable_half_edges() const noexcept;  ///< sum_s s n_s
  int check_half_edges() const noexcept;     ///< sum_t t m_t
  /// "n2,...,nl|m2,...,mr".
  std::string key() const;

  friend auto operator<=>(const PolymerType&, const PolymerType&) = default;
};

PolymerType polymer_type(const GeneralizedLoop& loop, int l, int r);

/// Constants of the activity bound: alpha[t] for t = 2..r-1 (> 1), alpha_r
/// in (0,1), beta[s] for s = 2..l (> 1). Vectors are indexed by degree.
struct BoundConstants {
  std::vector<double> alpha;
  double alpha_r = 0.9;
  std::vector<double> beta;

  static BoundConstants defaults(int l, int r, double alpha_t = 1.1, double alpha_r = 0.9,
                                 double beta_s = 1.1);
  /// Throws Error(DomainError) on out-of-range constants.
  void validate(int l, int r) const;
};

/// K-bar = (1 - alpha_r r h^2)^{m_r} prod_{t<r} (alpha_t h^{r-t})^{m_t}
///         prod_{s even} (1 + beta_s/2 s(s-1) h^2)^{n_s} prod_{s odd} (beta_s (s-1) h)^{n_s}.
/// Throws Error(DomainError) when alpha_r r h^2 >= 1.
double activity_bound(const PolymerType& type, double h, const BoundConstants& consts);

/// c = r - (2 + r) / (3 - l (1 - kappa)); Error(DomainError) unless
/// 3 - l(1-kappa) > 0 and c > 0.
double exponent_c(int l, int r, double kappa);

struct PolymerBoundCheck {
  bool activity_holds = false;  ///< |K| <= h^{c |gamma| / 2}
  double activity = 0.0;
  double activity_limit = 0.0;
  bool degree_holds = false;  ///< sum_{t<r} (r-t) m_t >= c |gamma|
  double degree_lhs = 0.0;
  double degree_rhs = 0.0;
  /// Type-count estimate of the boundary (omits degree-r checks):
  /// sum_{t<=r-1} m_t + sum_s (l-s) n_s >= kappa l sum_s n_s.
  bool type_expansion_holds = false;
  double type_expansion_lhs = 0.0;
  double expansion_rhs = 0.0;
  /// |dV| for V = the polymer's variables, and |dV| >= kappa l |V|.
  int boundary = 0;
  bool expansion_holds = false;
};

PolymerBoundCheck check_polymer_bound(const TannerGraph& g, const Polymer& polymer,
                                      const ActivityTables& tables, double h, double c, double kappa);

// --- small polymers ---------------------------------------------------------

struct PolymerCaps {
  std::uint64_t max_node_sets = 50'000'000;
  std::uint64_t max_polymers = 5'000'000;
  std::uint64_t max_polymer_sets = 200'000'000;
  std::uint64_t max_mayer_tuples = 500'000'000;
  LoopCaps loops;
};

/// All polymers with at most max_size touched nodes. Enumerates connected
/// node sets of the Tanner graph (each exactly once) and, inside each set,
/// the connected spanning edge subsets with all degrees >= 2. Sorted.
std::vector<Polymer> enumerate_small_polymers(const TannerGraph& g, int max_size,
                                              const PolymerCaps& caps = {});

/// A polymer with its activity and node set (joint numbering).
struct WeightedPolymer {
  Polymer polymer;
  double activity = 0.0;
  std::vector<int> nodes;
  std::vector<std::uint64_t> node_bits;

  bool overlaps(const WeightedPolymer& other) const noexcept;
};

std::vector<WeightedPolymer> weigh_polymers(const TannerGraph& g, std::span<const Polymer> polymers,
                                            const ActivityTables& tables);

/// Small polymers (|gamma| < lambda n) with activities.
std::vector<WeightedPolymer> small_polymers(const TannerGraph& g, const ActivityTables& tables,
                                            double lambda, const PolymerCaps& caps = {});

struct BrydgesResult {
  double q = 0.0;
  int argmax_node = -1;  ///< joint numbering; -1 when there is no polymer
};

/// Q = sup_z sum_{gamma containing z} e^{|gamma|} zeta0 |K(gamma)|.
BrydgesResult brydges_criterion(const TannerGraph& g, std::span<const WeightedPolymer> polymers,
                                double zeta0);
BrydgesResult brydges_criterion(const TannerGraph& g, std::span<const double> fields,
                                const MessageSet& msgs, double lambda, double zeta0,
                                const PolymerCaps& caps = {});

/// sums[k] = sum over unordered sets of k pairwise vertex-disjoint polymers
/// of prod K; sums[0] = 1. Stops at max_cardinality when given.
std::vector<double> disjoint_polymer_sums(std::span<const WeightedPolymer> polymers,
                                          std::optional<int> max_cardinality = std::nullopt,
                                          const PolymerCaps& caps = {});

struct SmallPolymerPartition {
  double z_p = 1.0;
  double z_p_minus_one = 0.0;  ///< sum without the empty configuration
  double via_loops = 1.0;      ///< loops whose components are all small
  double via_polymer_sets = 1.0;
  std::vector<double> by_cardinality;
  std::size_t polymer_count = 0;
};

/// Z_p by both routes; Error(ConsistencyFailure) if they differ by more than
/// 1e-10 relative.
SmallPolymerPartition small_polymer_partition(const TannerGraph& g, std::span<const double> fields,
                                              const MessageSet& msgs, double lambda,
                                              const PolymerCaps& caps = {});

struct BoundSpec {
  double h = 0.0;
  BoundConstants constants;
};

struct LargePolymerRemainder {
  double direct = 0.0;          ///< sum over loops with a component of >= lambda n nodes
  double via_difference = 0.0;  ///< loop sum - Z_p
  double loop_sum = 0.0;
  double z_p = 1.0;
  double abs_sum = 0.0;  ///< sum of |K| over the large-component loops
  /// sum of K-bar(type(g)) over the same loops (when a bound is supplied).
  std::optional<double> bound_sum;
};

LargePolymerRemainder large_polymer_remainder(const TannerGraph& g, std::span<const double> fields,
                                              const MessageSet& msgs, double lambda,
                                              const std::optional<BoundSpec>& bound = std::nullopt,
                                              const PolymerCaps& caps = {});

struct TypeCensus {
  std::map<PolymerType, std::uint64_t> counts;     ///< all nonempty loops
  std::map<PolymerType, std::uint64_t> in_domain;  ///< restricted to the large-type domain
  std::uint64_t nonempty_loops = 0;
  /// sum over in-domain types of K-bar(type) |Omega(type)| (when a bound is supplied).
  std::optional<double> markov_rhs;
};

/// Exact count of generalized loops per type. With lambda, also the subset
/// of types with lambda n <= size, balanced half-edges, sum n_s < n and
/// sum m_t < m.
TypeCensus type_census(const TannerGraph& g, std::optional<double> lambda,
                       const std::optional<BoundSpec>& bound = std::nullopt,
                       const LoopCaps& caps = {});

}  // namespace loopcorr
