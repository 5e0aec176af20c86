#pragma once

#include <span>
#include <vector>

#include "loopcorr/tanner.hpp"

namespace loopcorr {

/// BP messages in nats, indexed by edge id: eta[e] is eta_{i->a} and
/// eta_hat[e] is eta_hat_{a->i} for edge e = (i, a).
///
/// The trivial solution tanh eta = tanh eta_hat = 1 has no finite
/// representation and is carried as an explicit flag; its value vectors are
/// empty.
struct MessageSet {
  std::vector<double> eta;
  std::vector<double> eta_hat;
  bool trivial = false;

  static MessageSet zeros(const TannerGraph& g);
  static MessageSet trivial_solution();
  /// eta_{i->a} = h_i, eta_hat = 0.
  static MessageSet channel_init(const TannerGraph& g, std::span<const double> fields);

  friend bool operator==(const MessageSet&, const MessageSet&) = default;
};

/// Sup-norm distance between two finite message sets.
double max_abs_difference(const MessageSet& a, const MessageSet& b);

struct UpdateResult {
  MessageSet messages;
  /// Some check product reached |prod tanh| >= 1 - clamp and was clamped.
  bool clamped = false;
};

/// One flooding sweep: both eta' and eta_hat' are computed from `msgs`,
///   eta'_{i->a}     = h_i + sum_{b in di \ a} eta_hat_{b->i}
///   eta_hat'_{a->i} = atanh(prod_{j in da \ i} tanh eta_{j->a}),
/// then returned as (1-damping) new + damping old.
UpdateResult bp_update(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs,
                       double damping, double clamp = 1e-12);

struct BpOptions {
  double tol = 1e-12;
  int max_iter = 10'000;
  double damping = 0.5;
  double clamp = 1e-12;
};

struct BpResult {
  MessageSet messages;
  int iterations = 0;
  bool converged = false;
  bool clamped = false;
  /// Undamped sup-norm residual of the returned messages.
  double residual = 0.0;
};

/// Iterates bp_update from channel_init until the undamped residual of the
/// current iterate drops below tol (that iterate is returned) or max_iter
/// sweeps have been made.
BpResult bp_solve(const TannerGraph& g, std::span<const double> fields, const BpOptions& opts = {});

/// Undamped sup-norm residual |F(msgs) - msgs|.
double fixed_point_residual(const TannerGraph& g, std::span<const double> fields,
                            const MessageSet& msgs);

/// High-noise test: every |eta| <= h + (l-1) h^(r-1) + C h^r and every
/// |eta_hat| <= h^(r-1) + C h^r. The trivial solution never qualifies.
bool check_high_noise(const MessageSet& msgs, double h, int l, int r, double slack = 2.0);

}  // namespace loopcorr
