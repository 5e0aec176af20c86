#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

namespace loopcorr {

/// Half log-likelihood h = 1/2 ln((1-p)/p). Throws Error(DomainError) unless
/// 0 < p < 1.
double half_llr(double p);

/// BSC output under the all-zero transmitted codeword.
struct ChannelRealization {
  double p = 0.5;
  double h = 0.0;
  std::vector<std::uint8_t> y;

  /// h_i = (-1)^{y_i} h.
  std::vector<double> fields() const;
  int flips() const;
};

ChannelRealization sample_bsc(int n, double p, std::uint64_t seed);

/// Realization with the given output bits (bit i of `bits` is y_i).
ChannelRealization realization_from_bits(int n, double p, std::uint64_t bits);

struct WeightedOutput {
  ChannelRealization realization;
  double probability = 0.0;
};

/// All 2^n channel outputs with their probabilities, generated lazily.
class OutputSpace {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = WeightedOutput;
    using difference_type = std::ptrdiff_t;

    iterator(const OutputSpace* space, std::uint64_t index) : space_(space), index_(index) {}
    WeightedOutput operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    friend bool operator==(const iterator&, const iterator&) = default;

   private:
    const OutputSpace* space_;
    std::uint64_t index_;
  };

  OutputSpace(int n, double p);

  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }
  /// Output whose bit pattern is `index`, with probability p^w (1-p)^(n-w).
  WeightedOutput at(std::uint64_t index) const;
  double probability(std::uint64_t index) const;

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  int n_;
  double p_;
  std::vector<double> weight_by_flips_;
};

/// Refuses (Error(CapExceeded)) when n exceeds `cap`.
OutputSpace enumerate_outputs(int n, double p, int cap = 22);

}  // namespace loopcorr
