#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "loopcorr/bp.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

/// Edge subset in which every touched node has induced degree >= 2. The
/// empty loop is a valid value. Size counts touched nodes (variables plus
/// checks).
class GeneralizedLoop {
 public:
  GeneralizedLoop() = default;

  /// Throws Error(DomainError) if some touched node has induced degree 1.
  static GeneralizedLoop from_edges(const TannerGraph& g, std::vector<int> edge_ids);

  const std::vector<int>& edges() const noexcept { return edges_; }
  /// (variable, induced degree), ascending by variable.
  const std::vector<std::pair<int, int>>& var_degrees() const noexcept { return var_deg_; }
  /// (check, induced degree), ascending by check.
  const std::vector<std::pair<int, int>>& check_degrees() const noexcept { return check_deg_; }

  bool empty() const noexcept { return edges_.empty(); }
  int size() const noexcept { return static_cast<int>(var_deg_.size() + check_deg_.size()); }
  /// Touched nodes in the joint numbering (variables 0..n-1, checks n..n+m-1).
  std::vector<int> nodes(int num_vars) const;

  friend bool operator==(const GeneralizedLoop& a, const GeneralizedLoop& b) {
    return a.edges_ == b.edges_;
  }
  friend auto operator<=>(const GeneralizedLoop& a, const GeneralizedLoop& b) {
    return a.edges_ <=> b.edges_;
  }

 private:
  std::vector<int> edges_;
  std::vector<std::pair<int, int>> var_deg_;
  std::vector<std::pair<int, int>> check_deg_;
};

bool is_generalized_loop(const TannerGraph& g, std::span<const int> edge_ids);

/// Read-only view of the loop currently produced by an enumerator.
struct LoopState {
  std::span<const int> edges;
  std::span<const int> var_degree;    ///< induced degree per variable, 0 if untouched
  std::span<const int> check_degree;  ///< induced degree per check, 0 if untouched
  /// Bit k of check_mask[a] is set iff the k-th edge of g.check_edges(a) is in the loop.
  std::span<const std::uint64_t> check_mask;
};

enum class LoopEnumeration { Dfs, BruteForce };

struct LoopCaps {
  int brute_force_max_edges = 26;
  std::uint64_t max_loops = 100'000'000;
};

/// Calls visit once per generalized loop (the empty loop first). The DFS mode
/// decides edges in id order and abandons a branch as soon as a node whose
/// edges are all decided has induced degree 1; the brute-force mode filters
/// all 2^|E| subsets and serves as its oracle.
void for_each_generalized_loop(const TannerGraph& g, const std::function<void(const LoopState&)>& visit,
                               LoopEnumeration mode = LoopEnumeration::Dfs, const LoopCaps& caps = {});

std::vector<GeneralizedLoop> enumerate_generalized_loops(const TannerGraph& g,
                                                         LoopEnumeration mode = LoopEnumeration::Dfs,
                                                         const LoopCaps& caps = {});

// --- activities ------------------------------------------------------------

/// K_i = [(1-m)^(d-1) + (-1)^d (1+m)^(d-1)] / [2 (1-m^2)^(d-1)]
///     = E[(s - m)^d] / (1 - m^2)^d   for s = +-1 with mean m.
/// Throws Error(SingularInput) for |m| >= 1 and Error(DomainError) for d < 2.
double vertex_activity(int d, double m);

/// K_a for a check whose incoming tanh(eta_{i->a}) are `tanh_eta` (in
/// check_edges order), with loop edges selected by `in_loop`, and the
/// variable magnetizations `m` of the same neighbours.
double check_activity(std::span<const double> tanh_eta, std::uint64_t in_loop,
                      std::span<const double> m);

/// Precomputed K_i per (variable, degree) and K_a per (check, local edge
/// subset) for one message set. Weights of individual loops are products of
/// table entries.
class ActivityTables {
 public:
  ActivityTables(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs);

  double magnetization(int i) const noexcept { return m_[i]; }
  double var_activity(int i, int d) const noexcept { return var_[i][d]; }
  double check_activity(int a, std::uint64_t mask) const noexcept { return check_[a][mask]; }

  double weight(const LoopState& s) const noexcept;
  double weight(const GeneralizedLoop& loop) const;

  const TannerGraph& graph() const noexcept { return *g_; }

 private:
  const TannerGraph* g_;
  std::vector<double> m_;
  std::vector<std::vector<double>> var_;
  std::vector<std::vector<double>> check_;
  std::vector<int> check_pos_;  // position of edge e within check_edges(check of e)
};

/// K(g) = prod_{i in g} K_i prod_{a in g} K_a; K(empty) = 1.
double loop_weight(const GeneralizedLoop& loop, const ActivityTables& tables);

struct LoopSum {
  double sum = 0.0;
  std::uint64_t loops = 0;  ///< including the empty loop
};

/// Sum of K(g) over all generalized loops including the empty one.
LoopSum loop_series_sum(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs,
                        LoopEnumeration mode = LoopEnumeration::Dfs, const LoopCaps& caps = {});

struct LoopIdentityReport {
  double log_z_per_n = 0.0;
  double f_bethe = 0.0;
  double loop_sum = 0.0;
  std::uint64_t loops = 0;
  /// |(1/n) ln Z - f_Bethe - (1/n) ln sum K|; infinite when sign_anomaly.
  double residual = 0.0;
  /// Undamped BP residual of the supplied messages.
  double fixed_point_residual = 0.0;
  /// sum K <= 0, which is only possible away from BP fixed points.
  bool sign_anomaly = false;
};

LoopIdentityReport verify_loop_identity(const TannerGraph& g, std::span<const double> fields,
                                        const MessageSet& msgs, const LoopCaps& caps = {});

}  // namespace loopcorr
