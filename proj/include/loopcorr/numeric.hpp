#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace loopcorr {

/// ln(2 cosh x) without overflow for large |x|.
inline double ln_2cosh(double x) noexcept {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

/// Neumaier-compensated running sum. Order of add() calls is the order of
/// summation, so callers control reproducibility.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming log-sum-exp: value() == ln(sum_k exp(x_k)).
class LogSumExp {
 public:
  void add(double x) noexcept {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      acc_.add(std::exp(x - max_));
    } else {
      const double scale = std::exp(max_ - x);
      const double prev = acc_.value();
      acc_ = CompensatedSum{};
      acc_.add(prev * scale);
      acc_.add(1.0);
      max_ = x;
    }
  }
  void merge(const LogSumExp& other) noexcept {
    if (other.max_ == -std::numeric_limits<double>::infinity()) return;
    add_scaled(other.max_, other.acc_.value());
  }
  double value() const noexcept {
    if (max_ == -std::numeric_limits<double>::infinity()) return max_;
    return max_ + std::log(acc_.value());
  }

 private:
  void add_scaled(double mx, double acc) noexcept {
    if (mx <= max_) {
      acc_.add(acc * std::exp(mx - max_));
    } else {
      const double prev = acc_.value();
      acc_ = CompensatedSum{};
      acc_.add(prev * std::exp(max_ - mx));
      acc_.add(acc);
      max_ = mx;
    }
  }

  double max_ = -std::numeric_limits<double>::infinity();
  CompensatedSum acc_;
};

/// Binary entropy in nats; h2(0) = h2(1) = 0.
inline double binary_entropy(double x) noexcept {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

inline bool relative_close(double a, double b, double rel) noexcept {
  const double scale = std::fmax(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * (scale > 0.0 ? scale : 1.0);
}

}  // namespace loopcorr
