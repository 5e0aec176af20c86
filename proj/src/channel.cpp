#include "loopcorr/channel.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "loopcorr/error.hpp"
#include "loopcorr/rng.hpp"

namespace loopcorr {

double half_llr(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "flip probability " << p << " gives an infinite log-likelihood";
    throw Error(ErrorKind::DomainError, os.str());
  }
  return 0.5 * (std::log1p(-p) - std::log(p));
}

std::vector<double> ChannelRealization::fields() const {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] ? -h : h;
  return out;
}

int ChannelRealization::flips() const {
  int c = 0;
  for (auto b : y) c += b;
  return c;
}

ChannelRealization sample_bsc(int n, double p, std::uint64_t seed) {
  ChannelRealization out{p, half_llr(p), std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  Rng rng(seed);
  for (auto& b : out.y) b = rng.unit() < p ? 1 : 0;
  return out;
}

ChannelRealization realization_from_bits(int n, double p, std::uint64_t bits) {
  ChannelRealization out{p, half_llr(p), std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  for (int i = 0; i < n; ++i) out.y[i] = (bits >> i) & 1U;
  return out;
}

OutputSpace::OutputSpace(int n, double p) : n_(n), p_(p) {
  half_llr(p);
  weight_by_flips_.resize(static_cast<std::size_t>(n) + 1);
  for (int w = 0; w <= n; ++w) {
    weight_by_flips_[w] = std::exp(w * std::log(p) + (n - w) * std::log1p(-p));
  }
}

double OutputSpace::probability(std::uint64_t index) const {
  return weight_by_flips_[static_cast<std::size_t>(std::popcount(index))];
}

WeightedOutput OutputSpace::at(std::uint64_t index) const {
  return {realization_from_bits(n_, p_, index), probability(index)};
}

OutputSpace enumerate_outputs(int n, double p, int cap) {
  if (n < 0 || n > cap || n > 62) {
    throw Error(ErrorKind::CapExceeded,
                "output enumeration of n = " + std::to_string(n) + " exceeds cap " +
                    std::to_string(cap));
  }
  return OutputSpace(n, p);
}

}  // namespace loopcorr
