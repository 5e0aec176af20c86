#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "loopcorr/polymer.hpp"

namespace loopcorr {

/// Labeled graph on vertices 0..vertices-1.
struct MayerGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

/// All connected labeled graphs on M vertices (1 <= M <= 5).
std::vector<MayerGraph> connected_mayer_graphs(int vertices);

/// phi(H) = sum over connected spanning subgraphs G of H of (-1)^{|E(G)|},
/// for every graph H on M vertices. H is a bitmask over vertex pairs in
/// the order (0,1), (0,2), ..., (M-2,M-1).
class UrsellTable {
 public:
  explicit UrsellTable(int vertices);

  int vertices() const noexcept { return vertices_; }
  int pair_index(int a, int b) const noexcept;
  double operator()(std::uint32_t overlap_mask) const noexcept { return phi_[overlap_mask]; }

 private:
  int vertices_;
  std::vector<int> pair_index_;
  std::vector<double> phi_;
};

/// Coefficients c_1..c_K of ln(sum_k a_k z^k) given a_0 = 1 and a_1..a_K.
std::vector<double> log_series_coefficients(std::span<const double> a, int max_order);

struct MayerExpansion {
  /// terms[M-1]: (1/n) (1/M!) sum over M-tuples of small polymers of
  /// prod K times the Ursell weight of their overlap graph.
  std::vector<double> terms;
  std::vector<double> partial_sums;  ///< S_1..S_{M_max}
  /// The same orders from the log-series of Z_p(zeta).
  std::vector<double> log_series_terms;
  std::vector<double> log_series_partial_sums;
  double target = 0.0;               ///< (1/n) ln Z_p
  std::vector<double> errors;        ///< |S_M - target|
  std::uint64_t clusters = 0;        ///< multisets with connected overlap graph
  std::size_t polymer_count = 0;
};

MayerExpansion mayer_truncated(const TannerGraph& g, std::span<const WeightedPolymer> polymers,
                               int max_order, const PolymerCaps& caps = {});
MayerExpansion mayer_truncated(const TannerGraph& g, std::span<const double> fields,
                               const MessageSet& msgs, double lambda, int max_order,
                               const PolymerCaps& caps = {});

}  // namespace loopcorr
