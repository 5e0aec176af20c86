#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

namespace {

std::uint64_t saturating_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int j = 1; j <= k; ++j) {
    c = c * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
    if (c > std::numeric_limits<std::uint64_t>::max() / 64) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

// Largest subset size strictly below lambda*n.
int largest_size_below(double lambda, int n) {
  const double t = lambda * n;
  return static_cast<int>(std::ceil(t - 1e-9)) - 1;
}

class NeighbourCounter {
 public:
  explicit NeighbourCounter(const TannerGraph& g) : g_(g), stamp_(g.num_checks(), 0) {}

  int count(std::span<const int> vars) {
    ++epoch_;
    int distinct = 0;
    for (int i : vars) {
      for (int e : g_.var_edges(i)) {
        const int a = g_.edge(e).check;
        if (stamp_[a] != epoch_) {
          stamp_[a] = epoch_;
          ++distinct;
        }
      }
    }
    return distinct;
  }

 private:
  const TannerGraph& g_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

// Visits every size-s subset of {0..n-1} in lexicographic order until the
// visitor returns false. Returns the number visited.
template <typename Visit>
std::uint64_t for_each_subset(int n, int s, Visit&& visit) {
  std::vector<int> idx(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) idx[k] = k;
  std::uint64_t visited = 0;
  if (s > n) return 0;
  for (;;) {
    ++visited;
    if (!visit(std::span<const int>(idx))) return visited;
    int k = s - 1;
    while (k >= 0 && idx[k] == n - s + k) --k;
    if (k < 0) return visited;
    ++idx[k];
    for (int j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void require_cap(const TannerGraph& g, int max_size, std::uint64_t cap) {
  std::uint64_t total = 0;
  for (int s = 1; s <= max_size; ++s) {
    const auto c = saturating_binomial(g.num_vars(), s);
    total = (total > cap || c > cap) ? cap + 1 : total + c;
  }
  if (total > cap) {
    std::ostringstream os;
    os << "expansion check needs more than " << cap << " subsets (sizes up to " << max_size
       << " of " << g.num_vars() << " variables)";
    throw Error(ErrorKind::CapExceeded, os.str());
  }
}

}  // namespace

ExpanderResult is_expander(const TannerGraph& g, double lambda, double kappa,
                           std::uint64_t subset_cap) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(ErrorKind::DomainError, "lambda not in (0,1]");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::DomainError, "kappa not in (0,1)");

  const int max_size = std::min(largest_size_below(lambda, g.num_vars()), g.num_vars());
  require_cap(g, max_size, subset_cap);

  ExpanderResult result;
  NeighbourCounter counter(g);
  const double per_var = kappa * g.max_var_degree();
  for (int s = 1; s <= max_size && result.expander; ++s) {
    result.subsets_checked += for_each_subset(g.num_vars(), s, [&](std::span<const int> vars) {
      if (counter.count(vars) >= per_var * s) return true;
      result.expander = false;
      result.witness = std::vector<int>(vars.begin(), vars.end());
      return false;
    });
  }
  return result;
}

int largest_expanding_size(const TannerGraph& g, double kappa, int max_size,
                           std::uint64_t subset_cap) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::DomainError, "kappa not in (0,1)");
  max_size = std::min(max_size, g.num_vars());
  NeighbourCounter counter(g);
  const double per_var = kappa * g.max_var_degree();
  for (int s = 1; s <= max_size; ++s) {
    require_cap(g, s, subset_cap);
    bool ok = true;
    for_each_subset(g.num_vars(), s, [&](std::span<const int> vars) {
      ok = counter.count(vars) >= per_var * s;
      return ok;
    });
    if (!ok) return s - 1;
  }
  return max_size;
}

std::optional<double> first_root_by_scan(const std::function<double(double)>& f, double lo,
                                         double hi, std::size_t grid_points) {
  if (grid_points < 2 || !(hi > lo)) return std::nullopt;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  double x_prev = lo;
  double f_prev = f(lo);
  if (f_prev == 0.0) return lo;
  for (std::size_t k = 1; k < grid_points; ++k) {
    const double x = (k + 1 == grid_points) ? hi : lo + step * static_cast<double>(k);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) != std::signbit(f_prev)) {
      double a = x_prev;
      double b = x;
      double fa = f_prev;
      for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return std::fabs(fa) <= std::fabs(f(b)) ? a : b;
    }
    x_prev = x;
    f_prev = fx;
  }
  return std::nullopt;
}

double lambda0_equation(int l, int r, double kappa, double x, double entropy_base) {
  const double unit = std::log(entropy_base);
  const auto h2 = [unit](double p) { return binary_entropy(p) / unit; };
  const double kr = kappa * r;
  return (l - 1.0) / l * h2(x) - h2(x * kr) / r - x * kr * h2(1.0 / kr);
}

std::pair<double, double> admissible_kappa_interval(int l, int r) {
  return {1.0 - 2.0 * (r - 1.0) / (static_cast<double>(l) * r), 1.0 - 1.0 / l};
}

Lambda0Result solve_lambda0(int l, int r, double kappa, const Lambda0Options& opts) {
  if (l < 2 || r < 2) throw Error(ErrorKind::InfeasibleParameters, "need l >= 2 and r >= 2");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::DomainError, "kappa not in (0,1)");
  if (!(kappa * r > 1.0)) {
    throw Error(ErrorKind::InfeasibleParameters, "kappa*r <= 1: admissible lambda range is empty");
  }

  Lambda0Result out;
  const auto [k_lo, k_hi] = admissible_kappa_interval(l, r);
  if (!(kappa > k_lo && kappa < k_hi)) {
    std::ostringstream os;
    os << "kappa = " << kappa << " outside the admissible interval (" << k_lo << ", " << k_hi
       << ")";
    out.warning = os.str();
  }

  const double hi = 1.0 / (kappa * r) - opts.epsilon;
  const auto f = [&](double x) { return lambda0_equation(l, r, kappa, x, opts.entropy_base); };
  const auto root = first_root_by_scan(f, opts.epsilon, hi, opts.grid_points);
  if (!root) {
    std::ostringstream os;
    os << "no sign change of the expansion equation on (" << opts.epsilon << ", " << hi
       << ") for (l,r,kappa) = (" << l << "," << r << "," << kappa << ")";
    throw Error(ErrorKind::NoRoot, os.str());
  }
  out.lambda0 = *root;
  out.residual = std::fabs(f(*root));
  return out;
}

}  // namespace loopcorr
