#include "loopcorr/exact.hpp"

#include <bit>
#include <cmath>

#include "loopcorr/channel.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"

namespace loopcorr {

CodewordBasis codeword_basis(const TannerGraph& g) {
  return {g.num_vars(), gf2_nullspace(parity_check_matrix(g))};
}

namespace {

void require_kernel(int k, const ExactCaps& caps) {
  if (k > caps.max_kernel_dimension) {
    throw Error(ErrorKind::CapExceeded, "kernel dimension " + std::to_string(k) + " exceeds cap " +
                                            std::to_string(caps.max_kernel_dimension));
  }
}

}  // namespace

double log_partition(const CodewordBasis& basis, std::span<const double> fields,
                     const ExactCaps& caps) {
  const int k = basis.dimension();
  require_kernel(k, caps);
  if (fields.size() != static_cast<std::size_t>(basis.n)) {
    throw Error(ErrorKind::DomainError, "field vector length differs from code length");
  }

  std::vector<std::vector<int>> supports;
  supports.reserve(basis.vectors.size());
  for (const auto& v : basis.vectors) supports.push_back(v.support());

  std::vector<std::uint8_t> x(fields.size(), 0);
  const auto exact_sum = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] ? -fields[i] : fields[i];
    return s;
  };

  double s = exact_sum();
  LogSumExp lse;
  lse.add(s);
  const std::uint64_t steps = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < steps; ++t) {
    for (int i : supports[static_cast<std::size_t>(std::countr_zero(t))]) {
      s += x[i] ? 2.0 * fields[i] : -2.0 * fields[i];
      x[i] ^= 1U;
    }
    // Periodic resync bounds the drift of the incremental sum.
    if ((t & 0xFFF) == 0) s = exact_sum();
    lse.add(s);
  }
  return lse.value();
}

double log_partition(const TannerGraph& g, std::span<const double> fields, const ExactCaps& caps) {
  return log_partition(codeword_basis(g), fields, caps);
}

double conditional_entropy_exact(const TannerGraph& g, double p, const ExactCaps& caps) {
  const double h = half_llr(p);
  const auto outputs = enumerate_outputs(g.num_vars(), p, caps.max_outputs_n);
  const auto basis = codeword_basis(g);
  require_kernel(basis.dimension(), caps);

  CompensatedSum expected;
  for (std::uint64_t idx = 0; idx < outputs.size(); ++idx) {
    const auto fields = realization_from_bits(g.num_vars(), p, idx).fields();
    expected.add(outputs.probability(idx) * log_partition(basis, fields, caps));
  }
  return expected.value() / g.num_vars() - (1.0 - 2.0 * p) * h;
}

double conditional_entropy_direct(const TannerGraph& g, double p, const ExactCaps& caps) {
  half_llr(p);
  const int n = g.num_vars();
  if (n > caps.max_outputs_n || n > 62) {
    throw Error(ErrorKind::CapExceeded, "code length exceeds output enumeration cap");
  }
  const auto basis = codeword_basis(g);
  const int k = basis.dimension();
  require_kernel(k, caps);

  // Codewords as bit masks.
  std::vector<std::uint64_t> words(std::size_t{1} << k, 0);
  std::vector<std::uint64_t> gens;
  for (const auto& v : basis.vectors) {
    std::uint64_t w = 0;
    for (int i : v.support()) w |= std::uint64_t{1} << i;
    gens.push_back(w);
  }
  for (std::size_t c = 1; c < words.size(); ++c) {
    const int low = std::countr_zero(c);
    words[c] = words[c & (c - 1)] ^ gens[static_cast<std::size_t>(low)];
  }

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_prior = -k * std::log(2.0);
  std::vector<double> log_joint(words.size());

  CompensatedSum entropy;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    // log P(x, y) for each codeword x, then P(y) and the posterior entropy.
    LogSumExp log_py;
    for (std::size_t c = 0; c < words.size(); ++c) {
      const int d = std::popcount(words[c] ^ y);
      log_joint[c] = log_prior + d * log_p + (n - d) * log_q;
      log_py.add(log_joint[c]);
    }
    const double lpy = log_py.value();
    CompensatedSum h_post;
    for (double lj : log_joint) {
      const double log_post = lj - lpy;
      h_post.add(-std::exp(log_post) * log_post);
    }
    entropy.add(std::exp(lpy) * h_post.value());
  }
  return entropy.value() / n;
}

}  // namespace loopcorr
