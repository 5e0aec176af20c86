#include "loopcorr/bp.hpp"

#include <algorithm>
#include <cmath>

#include "loopcorr/error.hpp"

namespace loopcorr {

MessageSet MessageSet::zeros(const TannerGraph& g) {
  const auto e = static_cast<std::size_t>(g.num_edges());
  return {std::vector<double>(e, 0.0), std::vector<double>(e, 0.0), false};
}

MessageSet MessageSet::trivial_solution() { return {{}, {}, true}; }

MessageSet MessageSet::channel_init(const TannerGraph& g, std::span<const double> fields) {
  auto msgs = zeros(g);
  for (int e = 0; e < g.num_edges(); ++e) msgs.eta[e] = fields[g.edge(e).var];
  return msgs;
}

double max_abs_difference(const MessageSet& a, const MessageSet& b) {
  if (a.trivial || b.trivial) return a.trivial == b.trivial ? 0.0 : INFINITY;
  double d = 0.0;
  for (std::size_t e = 0; e < a.eta.size(); ++e) {
    d = std::max(d, std::fabs(a.eta[e] - b.eta[e]));
    d = std::max(d, std::fabs(a.eta_hat[e] - b.eta_hat[e]));
  }
  return d;
}

namespace {

void check_shape(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs) {
  if (fields.size() != static_cast<std::size_t>(g.num_vars())) {
    throw Error(ErrorKind::DomainError, "field vector length differs from variable count");
  }
  if (!msgs.trivial && (msgs.eta.size() != static_cast<std::size_t>(g.num_edges()) ||
                        msgs.eta_hat.size() != static_cast<std::size_t>(g.num_edges()))) {
    throw Error(ErrorKind::DomainError, "message set does not match the graph's edges");
  }
}

// Undamped sweep into `out`; returns whether any product was clamped.
bool sweep(const TannerGraph& g, std::span<const double> fields, const MessageSet& in,
           MessageSet& out, double clamp) {
  for (int i = 0; i < g.num_vars(); ++i) {
    const auto es = g.var_edges(i);
    double total = fields[i];
    for (int e : es) total += in.eta_hat[e];
    for (int e : es) out.eta[e] = total - in.eta_hat[e];
  }

  bool clamped = false;
  std::vector<double> t;
  for (int a = 0; a < g.num_checks(); ++a) {
    const auto es = g.check_edges(a);
    t.resize(es.size());
    for (std::size_t k = 0; k < es.size(); ++k) t[k] = std::tanh(in.eta[es[k]]);
    // Leave-one-out products without division (tanh may be exactly zero).
    for (std::size_t k = 0; k < es.size(); ++k) {
      double prod = 1.0;
      for (std::size_t j = 0; j < es.size(); ++j) {
        if (j != k) prod *= t[j];
      }
      if (std::fabs(prod) >= 1.0 - clamp) {
        prod = std::copysign(1.0 - clamp, prod);
        clamped = true;
      }
      out.eta_hat[es[k]] = std::atanh(prod);
    }
  }
  return clamped;
}

}  // namespace

UpdateResult bp_update(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs,
                       double damping, double clamp) {
  if (!(damping >= 0.0 && damping < 1.0)) throw Error(ErrorKind::DomainError, "damping not in [0,1)");
  check_shape(g, fields, msgs);
  if (msgs.trivial) return {MessageSet::trivial_solution(), false};

  UpdateResult res{MessageSet::zeros(g), false};
  res.clamped = sweep(g, fields, msgs, res.messages, clamp);
  if (damping > 0.0) {
    for (std::size_t e = 0; e < msgs.eta.size(); ++e) {
      res.messages.eta[e] = (1.0 - damping) * res.messages.eta[e] + damping * msgs.eta[e];
      res.messages.eta_hat[e] = (1.0 - damping) * res.messages.eta_hat[e] + damping * msgs.eta_hat[e];
    }
  }
  return res;
}

double fixed_point_residual(const TannerGraph& g, std::span<const double> fields,
                            const MessageSet& msgs) {
  check_shape(g, fields, msgs);
  if (msgs.trivial) return 0.0;
  MessageSet next = MessageSet::zeros(g);
  sweep(g, fields, msgs, next, 1e-12);
  return max_abs_difference(next, msgs);
}

BpResult bp_solve(const TannerGraph& g, std::span<const double> fields, const BpOptions& opts) {
  if (!(opts.damping >= 0.0 && opts.damping < 1.0)) {
    throw Error(ErrorKind::DomainError, "damping not in [0,1)");
  }
  check_shape(g, fields, MessageSet::zeros(g));

  BpResult res;
  res.messages = MessageSet::channel_init(g, fields);
  res.residual = INFINITY;
  MessageSet next = MessageSet::zeros(g);
  for (int it = 1; it <= opts.max_iter; ++it) {
    res.clamped = sweep(g, fields, res.messages, next, opts.clamp) || res.clamped;
    res.iterations = it;
    res.residual = max_abs_difference(next, res.messages);
    if (res.residual < opts.tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t e = 0; e < next.eta.size(); ++e) {
      res.messages.eta[e] = (1.0 - opts.damping) * next.eta[e] + opts.damping * res.messages.eta[e];
      res.messages.eta_hat[e] =
          (1.0 - opts.damping) * next.eta_hat[e] + opts.damping * res.messages.eta_hat[e];
    }
  }
  res.residual = fixed_point_residual(g, fields, res.messages);
  return res;
}

bool check_high_noise(const MessageSet& msgs, double h, int l, int r, double slack) {
  if (h < 0.0) throw Error(ErrorKind::DomainError, "h must be nonnegative");
  if (msgs.trivial) return false;
  const double eta_bound = h + (l - 1) * std::pow(h, r - 1) + slack * std::pow(h, r);
  const double hat_bound = std::pow(h, r - 1) + slack * std::pow(h, r);
  for (double v : msgs.eta) {
    if (!(std::fabs(v) <= eta_bound)) return false;
  }
  for (double v : msgs.eta_hat) {
    if (!(std::fabs(v) <= hat_bound)) return false;
  }
  return true;
}

}  // namespace loopcorr
