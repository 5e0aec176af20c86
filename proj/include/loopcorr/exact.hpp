#pragma once

#include <span>
#include <vector>

#include "loopcorr/gf2.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

/// GF(2) basis of the code {x : H x = 0}.
struct CodewordBasis {
  int n = 0;
  std::vector<BitVector> vectors;

  int dimension() const noexcept { return static_cast<int>(vectors.size()); }
};

CodewordBasis codeword_basis(const TannerGraph& g);

struct ExactCaps {
  int max_kernel_dimension = 26;
  int max_outputs_n = 22;
};

/// ln Z = ln sum_{codewords x} exp(sum_i (-1)^{x_i} h_i), enumerated along a
/// Gray-code walk of the kernel with incremental field sums.
double log_partition(const TannerGraph& g, std::span<const double> fields, const ExactCaps& caps = {});
double log_partition(const CodewordBasis& basis, std::span<const double> fields,
                     const ExactCaps& caps = {});

/// (1/n) E_h[ln Z] - (1-2p)/2 ln((1-p)/p), the expectation taken exactly over
/// all 2^n channel outputs.
double conditional_entropy_exact(const TannerGraph& g, double p, const ExactCaps& caps = {});

/// H(X|Y)/n computed from the joint law of a uniform codeword X and its BSC
/// output Y, without going through the partition function.
double conditional_entropy_direct(const TannerGraph& g, double p, const ExactCaps& caps = {});

}  // namespace loopcorr
