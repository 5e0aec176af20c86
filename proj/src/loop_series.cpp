#include "loopcorr/loop_series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "loopcorr/bethe.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/exact.hpp"
#include "loopcorr/numeric.hpp"

namespace loopcorr {

namespace {

std::vector<int> check_positions(const TannerGraph& g) {
  std::vector<int> pos(static_cast<std::size_t>(g.num_edges()), 0);
  for (int a = 0; a < g.num_checks(); ++a) {
    const auto es = g.check_edges(a);
    for (std::size_t k = 0; k < es.size(); ++k) pos[es[k]] = static_cast<int>(k);
  }
  return pos;
}

void require_check_degree_fits(const TannerGraph& g) {
  if (g.max_check_degree() > 62) {
    throw Error(ErrorKind::CapExceeded, "check degree above 62 is not supported");
  }
}

class LoopDfs {
 public:
  LoopDfs(const TannerGraph& g, const std::function<void(const LoopState&)>& visit,
          std::uint64_t max_loops)
      : g_(g),
        visit_(visit),
        max_loops_(max_loops),
        pos_(check_positions(g)),
        var_deg_(static_cast<std::size_t>(g.num_vars()), 0),
        var_rem_(static_cast<std::size_t>(g.num_vars()), 0),
        check_deg_(static_cast<std::size_t>(g.num_checks()), 0),
        check_rem_(static_cast<std::size_t>(g.num_checks()), 0),
        mask_(static_cast<std::size_t>(g.num_checks()), 0) {
    for (int i = 0; i < g.num_vars(); ++i) var_rem_[i] = g.var_degree(i);
    for (int a = 0; a < g.num_checks(); ++a) check_rem_[a] = g.check_degree(a);
    chosen_.reserve(static_cast<std::size_t>(g.num_edges()));
  }

  void run() { descend(0); }

 private:
  bool dead(int i, int a) const {
    return (var_deg_[i] == 1 && var_rem_[i] == 0) || (check_deg_[a] == 1 && check_rem_[a] == 0);
  }

  void descend(int k) {
    if (k == g_.num_edges()) {
      if (++emitted_ > max_loops_) {
        throw Error(ErrorKind::CapExceeded,
                    "more than " + std::to_string(max_loops_) + " generalized loops");
      }
      visit_(LoopState{chosen_, var_deg_, check_deg_, mask_});
      return;
    }
    const auto [i, a] = g_.edge(k);
    --var_rem_[i];
    --check_rem_[a];

    if (!dead(i, a)) descend(k + 1);

    ++var_deg_[i];
    ++check_deg_[a];
    mask_[a] |= std::uint64_t{1} << pos_[k];
    chosen_.push_back(k);
    if (!dead(i, a)) descend(k + 1);
    chosen_.pop_back();
    mask_[a] &= ~(std::uint64_t{1} << pos_[k]);
    --var_deg_[i];
    --check_deg_[a];

    ++var_rem_[i];
    ++check_rem_[a];
  }

  const TannerGraph& g_;
  const std::function<void(const LoopState&)>& visit_;
  std::uint64_t max_loops_;
  std::uint64_t emitted_ = 0;
  std::vector<int> pos_;
  std::vector<int> var_deg_, var_rem_, check_deg_, check_rem_;
  std::vector<std::uint64_t> mask_;
  std::vector<int> chosen_;
};

void brute_force(const TannerGraph& g, const std::function<void(const LoopState&)>& visit,
                 const LoopCaps& caps) {
  const int ne = g.num_edges();
  if (ne > caps.brute_force_max_edges || ne > 62) {
    throw Error(ErrorKind::CapExceeded, "brute-force loop enumeration over " + std::to_string(ne) +
                                            " edges exceeds cap " +
                                            std::to_string(caps.brute_force_max_edges));
  }
  std::vector<std::uint64_t> var_edges(static_cast<std::size_t>(g.num_vars()), 0);
  std::vector<std::uint64_t> check_edges(static_cast<std::size_t>(g.num_checks()), 0);
  for (int e = 0; e < ne; ++e) {
    var_edges[g.edge(e).var] |= std::uint64_t{1} << e;
    check_edges[g.edge(e).check] |= std::uint64_t{1} << e;
  }
  const auto pos = check_positions(g);

  std::vector<int> var_deg(var_edges.size()), check_deg(check_edges.size()), chosen;
  std::vector<std::uint64_t> mask(check_edges.size());
  std::uint64_t emitted = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ne); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < var_edges.size() && ok; ++i) {
      var_deg[i] = std::popcount(s & var_edges[i]);
      ok = var_deg[i] != 1;
    }
    for (std::size_t a = 0; a < check_edges.size() && ok; ++a) {
      check_deg[a] = std::popcount(s & check_edges[a]);
      ok = check_deg[a] != 1;
    }
    if (!ok) continue;
    if (++emitted > caps.max_loops) {
      throw Error(ErrorKind::CapExceeded, "more than " + std::to_string(caps.max_loops) + " loops");
    }
    chosen.clear();
    std::fill(mask.begin(), mask.end(), 0);
    for (int e = 0; e < ne; ++e) {
      if ((s >> e) & 1U) {
        chosen.push_back(e);
        mask[g.edge(e).check] |= std::uint64_t{1} << pos[e];
      }
    }
    visit(LoopState{chosen, var_deg, check_deg, mask});
  }
}

}  // namespace

// --- GeneralizedLoop --------------------------------------------------------

bool is_generalized_loop(const TannerGraph& g, std::span<const int> edge_ids) {
  std::vector<int> vd(static_cast<std::size_t>(g.num_vars()), 0);
  std::vector<int> cd(static_cast<std::size_t>(g.num_checks()), 0);
  for (int e : edge_ids) {
    if (e < 0 || e >= g.num_edges()) return false;
    ++vd[g.edge(e).var];
    ++cd[g.edge(e).check];
  }
  return std::none_of(vd.begin(), vd.end(), [](int d) { return d == 1; }) &&
         std::none_of(cd.begin(), cd.end(), [](int d) { return d == 1; });
}

GeneralizedLoop GeneralizedLoop::from_edges(const TannerGraph& g, std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
  if (!is_generalized_loop(g, edge_ids)) {
    throw Error(ErrorKind::DomainError, "edge subset has a dangling edge");
  }
  GeneralizedLoop loop;
  loop.edges_ = std::move(edge_ids);
  std::vector<int> vd(static_cast<std::size_t>(g.num_vars()), 0);
  std::vector<int> cd(static_cast<std::size_t>(g.num_checks()), 0);
  for (int e : loop.edges_) {
    ++vd[g.edge(e).var];
    ++cd[g.edge(e).check];
  }
  for (int i = 0; i < g.num_vars(); ++i) {
    if (vd[i]) loop.var_deg_.emplace_back(i, vd[i]);
  }
  for (int a = 0; a < g.num_checks(); ++a) {
    if (cd[a]) loop.check_deg_.emplace_back(a, cd[a]);
  }
  return loop;
}

std::vector<int> GeneralizedLoop::nodes(int num_vars) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (const auto& [i, d] : var_deg_) out.push_back(i);
  for (const auto& [a, d] : check_deg_) out.push_back(num_vars + a);
  return out;
}

void for_each_generalized_loop(const TannerGraph& g, const std::function<void(const LoopState&)>& visit,
                               LoopEnumeration mode, const LoopCaps& caps) {
  require_check_degree_fits(g);
  if (mode == LoopEnumeration::BruteForce) {
    brute_force(g, visit, caps);
  } else {
    LoopDfs(g, visit, caps.max_loops).run();
  }
}

std::vector<GeneralizedLoop> enumerate_generalized_loops(const TannerGraph& g, LoopEnumeration mode,
                                                         const LoopCaps& caps) {
  std::vector<GeneralizedLoop> out;
  for_each_generalized_loop(
      g,
      [&](const LoopState& s) {
        out.push_back(GeneralizedLoop::from_edges(g, std::vector<int>(s.edges.begin(), s.edges.end())));
      },
      mode, caps);
  std::sort(out.begin(), out.end());
  return out;
}

// --- activities --------------------------------------------------------------

double vertex_activity(int d, double m) {
  if (d < 2) throw Error(ErrorKind::DomainError, "induced degree below 2");
  if (!(std::fabs(m) < 1.0)) throw Error(ErrorKind::SingularInput, "|m_i| = 1");
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  const double num = std::pow(1.0 - m, d - 1) + sign * std::pow(1.0 + m, d - 1);
  return num / (2.0 * std::pow((1.0 - m) * (1.0 + m), d - 1));
}

double check_activity(std::span<const double> tanh_eta, std::uint64_t in_loop,
                      std::span<const double> m) {
  const int deg = static_cast<int>(tanh_eta.size());
  const int d = std::popcount(in_loop);
  double all = 1.0;
  for (double t : tanh_eta) all *= t;
  if (1.0 + all == 0.0) throw Error(ErrorKind::SingularInput, "1 + prod tanh eta = 0 at a check");

  double value = 1.0;
  for (int k = 0; k < deg; ++k) {
    const double t = tanh_eta[k];
    if ((in_loop >> k) & 1U) {
      double others_sq = 1.0;
      for (int j = 0; j < deg; ++j) {
        if (j != k) others_sq *= tanh_eta[j] * tanh_eta[j];
      }
      const double num = (1.0 - t) * (1.0 + t);
      const double den = 1.0 - others_sq;
      const double var = (1.0 - m[k]) * (1.0 + m[k]);
      if (!(den > 0.0) || !(num > 0.0) || !(var > 0.0)) {
        throw Error(ErrorKind::SingularInput, "|tanh eta| = 1 or |m| = 1 at a check");
      }
      value *= std::sqrt(num / den) * std::sqrt(var);
    } else {
      value *= t;
    }
  }
  double powered = 1.0;
  for (double t : tanh_eta) powered *= std::pow(t, d - 1);
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  return value * (1.0 + sign * powered) / (1.0 + all);
}

ActivityTables::ActivityTables(const TannerGraph& g, std::span<const double> fields,
                               const MessageSet& msgs)
    : g_(&g), check_pos_(check_positions(g)) {
  if (msgs.trivial) throw Error(ErrorKind::SingularInput, "trivial solution has no activities");
  require_check_degree_fits(g);
  if (g.max_check_degree() > 24) {
    throw Error(ErrorKind::CapExceeded, "check activity table above degree 24");
  }

  m_.resize(static_cast<std::size_t>(g.num_vars()));
  var_.resize(m_.size());
  for (int i = 0; i < g.num_vars(); ++i) {
    double total = fields[i];
    for (int e : g.var_edges(i)) total += msgs.eta_hat[e];
    m_[i] = std::tanh(total);
    var_[i].assign(static_cast<std::size_t>(g.var_degree(i)) + 1, 0.0);
    for (int d = 2; d <= g.var_degree(i); ++d) var_[i][d] = vertex_activity(d, m_[i]);
  }

  check_.resize(static_cast<std::size_t>(g.num_checks()));
  std::vector<double> t, mm;
  for (int a = 0; a < g.num_checks(); ++a) {
    const auto es = g.check_edges(a);
    t.clear();
    mm.clear();
    for (int e : es) {
      t.push_back(std::tanh(msgs.eta[e]));
      mm.push_back(m_[g.edge(e).var]);
    }
    const std::uint64_t subsets = std::uint64_t{1} << es.size();
    check_[a].assign(subsets, 0.0);
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      if (std::popcount(mask) >= 2) check_[a][mask] = loopcorr::check_activity(t, mask, mm);
    }
  }
}

double ActivityTables::weight(const LoopState& s) const noexcept {
  double w = 1.0;
  for (std::size_t i = 0; i < s.var_degree.size(); ++i) {
    if (s.var_degree[i]) w *= var_[i][s.var_degree[i]];
  }
  for (std::size_t a = 0; a < s.check_degree.size(); ++a) {
    if (s.check_degree[a]) w *= check_[a][s.check_mask[a]];
  }
  return w;
}

double ActivityTables::weight(const GeneralizedLoop& loop) const {
  double w = 1.0;
  for (const auto& [i, d] : loop.var_degrees()) w *= var_[i][d];
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(g_->num_checks()), 0);
  for (int e : loop.edges()) masks[g_->edge(e).check] |= std::uint64_t{1} << check_pos_[e];
  for (const auto& [a, d] : loop.check_degrees()) w *= check_[a][masks[a]];
  return w;
}

double loop_weight(const GeneralizedLoop& loop, const ActivityTables& tables) {
  return tables.weight(loop);
}

LoopSum loop_series_sum(const TannerGraph& g, std::span<const double> fields, const MessageSet& msgs,
                        LoopEnumeration mode, const LoopCaps& caps) {
  const ActivityTables tables(g, fields, msgs);
  CompensatedSum sum;
  LoopSum out;
  for_each_generalized_loop(
      g,
      [&](const LoopState& s) {
        sum.add(tables.weight(s));
        ++out.loops;
      },
      mode, caps);
  out.sum = sum.value();
  return out;
}

LoopIdentityReport verify_loop_identity(const TannerGraph& g, std::span<const double> fields,
                                        const MessageSet& msgs, const LoopCaps& caps) {
  LoopIdentityReport rep;
  const double n = g.num_vars();
  rep.fixed_point_residual = fixed_point_residual(g, fields, msgs);
  rep.log_z_per_n = log_partition(g, fields) / n;
  rep.f_bethe = bethe_free_energy(g, fields, msgs);
  const auto ls = loop_series_sum(g, fields, msgs, LoopEnumeration::Dfs, caps);
  rep.loop_sum = ls.sum;
  rep.loops = ls.loops;
  if (!(ls.sum > 0.0)) {
    rep.sign_anomaly = true;
    rep.residual = INFINITY;
    return rep;
  }
  rep.residual = std::fabs(rep.log_z_per_n - rep.f_bethe - std::log(ls.sum) / n);
  return rep;
}

}  // namespace loopcorr
