#include "loopcorr/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "loopcorr/bethe.hpp"
#include "loopcorr/channel.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/gf2.hpp"
#include "loopcorr/mayer.hpp"
#include "loopcorr/numeric.hpp"
#include "loopcorr/rng.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::ParseError, "bad value for '" + key + "': '" + value + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad_value(key, value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  if (out.empty()) bad_value(key, value);
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Identity: return "identity";
    case Command::Theorem1: return "theorem1";
    case Command::Theorem2: return "theorem2";
    case Command::Bounds: return "bounds";
    case Command::Census: return "census";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::Identity, Command::Theorem1, Command::Theorem2, Command::Bounds,
                    Command::Census}) {
    if (s == to_string(c)) return c;
  }
  throw Error(ErrorKind::ParseError, "unknown command '" + s + "'");
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw Error(ErrorKind::ParseError, "unknown format '" + s + "'");
}

// --- config ------------------------------------------------------------------

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "command") command = parse_command(value);
  else if (key == "l") l = parse_number<int>(key, value);
  else if (key == "r") r = parse_number<int>(key, value);
  else if (key == "n") n = parse_int_list(key, value);
  else if (key == "p") p = parse_number<double>(key, value);
  else if (key == "h") h = parse_number<double>(key, value);
  else if (key == "trials") trials = parse_number<int>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "kappa") kappa = parse_number<double>(key, value);
  else if (key == "lambda") lambda = parse_number<double>(key, value);
  else if (key == "zeta0") zeta0 = parse_number<double>(key, value);
  else if (key == "slack") slack = parse_number<double>(key, value);
  else if (key == "alpha_t") alpha_t = parse_number<double>(key, value);
  else if (key == "alpha_r") alpha_r = parse_number<double>(key, value);
  else if (key == "beta_s") beta_s = parse_number<double>(key, value);
  else if (key == "mayer_order") mayer_order = parse_number<int>(key, value);
  else if (key == "bp_tol") bp.tol = parse_number<double>(key, value);
  else if (key == "bp_max_iter") bp.max_iter = parse_number<int>(key, value);
  else if (key == "bp_damping") bp.damping = parse_number<double>(key, value);
  else if (key == "bp_clamp") bp.clamp = parse_number<double>(key, value);
  else if (key == "max_kernel_dimension") exact.max_kernel_dimension = parse_number<int>(key, value);
  else if (key == "max_outputs_n") exact.max_outputs_n = parse_number<int>(key, value);
  else if (key == "max_loops") loops.max_loops = parse_number<std::uint64_t>(key, value);
  else if (key == "brute_force_max_edges") loops.brute_force_max_edges = parse_number<int>(key, value);
  else if (key == "max_polymers") max_polymers = parse_number<std::uint64_t>(key, value);
  else if (key == "max_mayer_polymers") max_mayer_polymers = parse_number<std::uint64_t>(key, value);
  else if (key == "expander_subset_cap") expander_subset_cap = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "format") format = parse_format(value);
  else if (key == "workers") workers = parse_number<int>(key, value);
  else if (key == "record_timing") record_timing = parse_bool(key, value);
  else throw Error(ErrorKind::ParseError, "unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "command = " << to_string(command) << '\n';
  os << "l = " << l << '\n' << "r = " << r << '\n';
  os << "n = ";
  for (std::size_t k = 0; k < n.size(); ++k) os << (k ? "," : "") << n[k];
  os << '\n';
  if (p) os << "p = " << fmt(*p) << '\n';
  if (h) os << "h = " << fmt(*h) << '\n';
  os << "trials = " << trials << '\n' << "seed = " << seed << '\n';
  if (kappa) os << "kappa = " << fmt(*kappa) << '\n';
  if (lambda) os << "lambda = " << fmt(*lambda) << '\n';
  os << "zeta0 = " << fmt(zeta0) << '\n' << "slack = " << fmt(slack) << '\n';
  os << "alpha_t = " << fmt(alpha_t) << '\n' << "alpha_r = " << fmt(alpha_r) << '\n';
  os << "beta_s = " << fmt(beta_s) << '\n' << "mayer_order = " << mayer_order << '\n';
  os << "bp_tol = " << fmt(bp.tol) << '\n' << "bp_max_iter = " << bp.max_iter << '\n';
  os << "bp_damping = " << fmt(bp.damping) << '\n' << "bp_clamp = " << fmt(bp.clamp) << '\n';
  os << "max_kernel_dimension = " << exact.max_kernel_dimension << '\n';
  os << "max_outputs_n = " << exact.max_outputs_n << '\n';
  os << "max_loops = " << loops.max_loops << '\n';
  os << "brute_force_max_edges = " << loops.brute_force_max_edges << '\n';
  os << "max_polymers = " << max_polymers << '\n';
  os << "max_mayer_polymers = " << max_mayer_polymers << '\n';
  os << "expander_subset_cap = " << expander_subset_cap << '\n';
  if (!out.empty()) os << "out = " << out << '\n';
  os << "format = " << to_string(format) << '\n';
  os << "workers = " << workers << '\n';
  os << "record_timing = " << (record_timing ? "true" : "false") << '\n';
  return os.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.serialize() == b.serialize();
}

void ExperimentConfig::validate() const {
  auto infeasible = [](const std::string& what) { throw Error(ErrorKind::InfeasibleParameters, what); };
  auto domain = [](const std::string& what) { throw Error(ErrorKind::DomainError, what); };
  if (l < 2 || r < 2) infeasible("l and r must be at least 2");
  if (n.empty()) infeasible("n list is empty");
  for (int v : n) {
    if (v <= 0) infeasible("n must be positive");
    if ((v * l) % r != 0) infeasible("n*l must be divisible by r for n = " + std::to_string(v));
    if (r > v) infeasible("r exceeds n = " + std::to_string(v));
  }
  if (p && h) domain("set at most one of p and h");
  if (p && !(*p > 0.0 && *p <= 0.5)) domain("p must lie in (0, 0.5]");
  if (h && !(*h >= 0.0 && std::isfinite(*h))) domain("h must be finite and nonnegative");
  if (trials < 0) domain("trials must be nonnegative");
  if (workers < 1) domain("workers must be at least 1");
  if (kappa && !(*kappa > 0.0 && *kappa < 1.0)) domain("kappa must lie in (0,1)");
  if (lambda && !(*lambda > 0.0 && *lambda <= 1.0)) domain("lambda must lie in (0,1]");
  if (!(zeta0 > 0.0)) domain("zeta0 must be positive");
  if (!(slack >= 0.0)) domain("slack must be nonnegative");
  if (mayer_order < 0 || mayer_order > 5) domain("mayer_order must lie in 0..5");
  if (!(bp.tol > 0.0) || bp.max_iter < 0) domain("bp_tol must be positive and bp_max_iter nonnegative");
  if (!(bp.damping >= 0.0 && bp.damping < 1.0)) domain("bp_damping must lie in [0,1)");
  bound_constants().validate(l, r);
  if (command == Command::Theorem1 || command == Command::Theorem2) {
    for (int v : n) {
      // The kernel dimension is at least n - m.
      if (v - v * l / r > exact.max_kernel_dimension) {
        throw Error(ErrorKind::CapExceeded,
                    "kernel dimension at n = " + std::to_string(v) + " exceeds max_kernel_dimension");
      }
    }
  }
}

double ExperimentConfig::channel_p() const {
  if (p) return *p;
  if (h) return 1.0 / (1.0 + std::exp(2.0 * *h));
  return 0.45;
}

double ExperimentConfig::channel_h() const {
  if (h) return *h;
  return half_llr(channel_p());
}

double ExperimentConfig::resolved_kappa() const {
  if (kappa) return *kappa;
  const auto [lo, hi] = admissible_kappa_interval(l, r);
  return 0.5 * (lo + hi);
}

BoundConstants ExperimentConfig::bound_constants() const {
  return BoundConstants::defaults(l, r, alpha_t, alpha_r, beta_s);
}

PolymerCaps ExperimentConfig::polymer_caps() const {
  PolymerCaps caps;
  caps.max_polymers = max_polymers;
  caps.loops = loops;
  return caps;
}

// --- trials ------------------------------------------------------------------

namespace {

TrialRecord run_trial_impl(const ExperimentConfig& cfg, int n, int trial,
                           std::optional<double> default_lambda) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.n = n;
  rec.trial = trial;
  rec.graph_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(n), 0);
  rec.channel_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(n), 1);
  rec.h = cfg.channel_h();
  rec.kappa = cfg.resolved_kappa();
  rec.lambda = kNaN;
  rec.f_bethe = rec.log_z_per_n = rec.gap1 = rec.bp_residual = kNaN;

  try {
    const TannerGraph g = generate_regular(n, cfg.l, cfg.r, rec.graph_seed);
    rec.rank = gf2_rank(parity_check_matrix(g));
    const auto channel = sample_bsc(n, cfg.channel_p(), rec.channel_seed);
    rec.flips = channel.flips();
    std::vector<double> fields(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) fields[i] = channel.y[i] ? -rec.h : rec.h;

    const auto bp = bp_solve(g, fields, cfg.bp);
    rec.bp_converged = bp.converged;
    rec.bp_iterations = bp.iterations;
    rec.bp_residual = bp.residual;
    rec.high_noise = check_high_noise(bp.messages, rec.h, cfg.l, cfg.r, cfg.slack);
    rec.f_bethe = bethe_free_energy(g, fields, bp.messages);
    rec.log_z_per_n = log_partition(g, fields, cfg.exact) / n;
    rec.gap1 = std::fabs(rec.log_z_per_n - rec.f_bethe);

    const bool needs_polymers = cfg.command == Command::Theorem2 || cfg.command == Command::Bounds ||
                                cfg.command == Command::Census;
    if (cfg.lambda) {
      rec.lambda = *cfg.lambda;
    } else if (needs_polymers) {
      const int s = largest_expanding_size(g, rec.kappa, n - 1, cfg.expander_subset_cap);
      rec.lambda = static_cast<double>(s + 1) / n;
    } else if (default_lambda) {
      rec.lambda = *default_lambda;
    }
    if (std::isfinite(rec.lambda)) {
      try {
        rec.expander = is_expander(g, rec.lambda, rec.kappa, cfg.expander_subset_cap).expander;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CapExceeded) throw;
      }
    }

    const PolymerCaps caps = cfg.polymer_caps();
    switch (cfg.command) {
      case Command::Identity: {
        const auto report = verify_loop_identity(g, fields, bp.messages, cfg.loops);
        rec.loop_sum = report.loop_sum;
        rec.loops = report.loops;
        rec.identity_residual = report.residual;
        break;
      }
      case Command::Theorem1:
        break;
      case Command::Theorem2: {
        const auto zp = small_polymer_partition(g, fields, bp.messages, rec.lambda, caps);
        rec.z_p = zp.z_p;
        rec.polymer_count = zp.polymer_count;
        rec.gap2 = std::fabs(rec.log_z_per_n - rec.f_bethe - std::log1p(zp.z_p_minus_one) / n);
        rec.q = brydges_criterion(g, fields, bp.messages, rec.lambda, cfg.zeta0, caps).q;
        break;
      }
      case Command::Bounds: {
        const ActivityTables tables(g, fields, bp.messages);
        const BoundConstants consts = cfg.bound_constants();
        BoundsSummary b;
        for_each_generalized_loop(
            g,
            [&](const LoopState& s) {
              if (s.edges.empty()) return;
              PolymerType t{std::vector<int>(static_cast<std::size_t>(cfg.l) + 1, 0),
                            std::vector<int>(static_cast<std::size_t>(cfg.r) + 1, 0)};
              for (int d : s.var_degree) {
                if (d) ++t.n_by_degree[d];
              }
              for (int d : s.check_degree) {
                if (d) ++t.m_by_degree[d];
              }
              const double k = std::fabs(tables.weight(s));
              const double bound = activity_bound(t, rec.h, consts);
              ++b.loops_checked;
              if (k > bound) ++b.activity_bound_violations;
              if (bound > 0.0) b.worst_activity_ratio = std::max(b.worst_activity_ratio, k / bound);
            },
            LoopEnumeration::Dfs, cfg.loops);

        const auto polys = small_polymers(g, tables, rec.lambda, caps);
        rec.polymer_count = polys.size();
        b.exponent_c = exponent_c(cfg.l, cfg.r, rec.kappa);
        for (const auto& p : polys) {
          const auto check = check_polymer_bound(g, p.polymer, tables, rec.h, b.exponent_c, rec.kappa);
          ++b.polymers_checked;
          b.polymer_bound_violations += !check.activity_holds;
          b.degree_violations += !check.degree_holds;
          b.expansion_violations += !check.expansion_holds;
          b.type_expansion_violations += !check.type_expansion_holds;
        }
        rec.q = brydges_criterion(g, polys, cfg.zeta0).q;
        rec.q_at_one = brydges_criterion(g, polys, 1.0).q;
        const auto sums = disjoint_polymer_sums(polys, std::nullopt, caps);
        CompensatedSum zp;
        for (double v : sums) zp.add(v);
        rec.z_p = zp.value();
        if (cfg.mayer_order > 0 && polys.size() <= cfg.max_mayer_polymers) {
          b.mayer_errors = mayer_truncated(g, polys, cfg.mayer_order, caps).errors;
        }
        rec.bounds = std::move(b);
        break;
      }
      case Command::Census: {
        const BoundSpec spec{rec.h, cfg.bound_constants()};
        const auto census = type_census(g, rec.lambda, spec, cfg.loops);
        const auto rem = large_polymer_remainder(g, fields, bp.messages, rec.lambda, spec, caps);
        CensusSummary c;
        c.nonempty_loops = census.nonempty_loops;
        c.types = census.counts.size();
        c.domain_types = census.in_domain.size();
        for (const auto& [t, count] : census.in_domain) c.domain_loops += count;
        c.markov_rhs = census.markov_rhs;
        c.remainder = rem.direct;
        c.remainder_abs = rem.abs_sum;
        c.remainder_bound = rem.bound_sum;
        for (const auto& [t, count] : census.counts) c.counts[t.key()] = count;
        rec.z_p = rem.z_p;
        rec.loop_sum = rem.loop_sum;
        rec.census = std::move(c);
        break;
      }
    }
  } catch (const Error& e) {
    rec.error = e.what();
  }
  if (cfg.record_timing) {
    rec.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

std::optional<double> default_lambda_for(const ExperimentConfig& cfg) {
  if (cfg.lambda || cfg.command != Command::Theorem1) return std::nullopt;
  return solve_lambda0(cfg.l, cfg.r, cfg.resolved_kappa()).lambda0;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, int n, int trial) {
  return run_trial_impl(cfg, n, trial, default_lambda_for(cfg));
}

ResultSet run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto lambda0 = default_lambda_for(cfg);
  std::vector<std::pair<int, int>> jobs;
  for (int n : cfg.n) {
    for (int t = 0; t < cfg.trials; ++t) jobs.emplace_back(n, t);
  }
  ResultSet results{cfg, std::vector<TrialRecord>(jobs.size()), {}};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      results.records[k] = run_trial_impl(cfg, jobs[k].first, jobs[k].second, lambda0);
    }
  };
  const int threads = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  results.aggregates = aggregate(cfg, results.records);
  return results;
}

ResultSet run_identity_suite(ExperimentConfig cfg) {
  cfg.command = Command::Identity;
  return run_experiment(cfg);
}
ResultSet run_theorem1_sweep(ExperimentConfig cfg) {
  cfg.command = Command::Theorem1;
  return run_experiment(cfg);
}
ResultSet run_theorem2_check(ExperimentConfig cfg) {
  cfg.command = Command::Theorem2;
  return run_experiment(cfg);
}
ResultSet run_bounds(ExperimentConfig cfg) {
  cfg.command = Command::Bounds;
  return run_experiment(cfg);
}
ResultSet run_census(ExperimentConfig cfg) {
  cfg.command = Command::Census;
  return run_experiment(cfg);
}

std::vector<Row> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::vector<Row> out;
  for (int n : cfg.n) {
    std::vector<const TrialRecord*> ok;
    std::uint64_t total = 0;
    std::uint64_t errors = 0;
    for (const auto& rec : records) {
      if (rec.n != n) continue;
      ++total;
      if (rec.error) {
        ++errors;
      } else {
        ok.push_back(&rec);
      }
    }
    Row row{{"n", std::int64_t{n}}, {"trials", total}, {"errors", errors}};
    auto fraction = [&](auto pred) -> double {
      if (ok.empty()) return kNaN;
      std::size_t c = 0;
      for (const auto* r : ok) c += pred(*r) ? 1 : 0;
      return static_cast<double>(c) / static_cast<double>(ok.size());
    };
    auto collect = [&](auto get, auto keep) {
      std::vector<double> v;
      for (const auto* r : ok) {
        if (keep(*r)) v.push_back(get(*r));
      }
      return v;
    };
    const auto all = [](const TrialRecord&) { return true; };
    const auto on_expander = [](const TrialRecord& r) { return r.expander.value_or(false); };
    const auto gap1 = [](const TrialRecord& r) { return r.gap1; };

    row.emplace_back("bp_converged_fraction", fraction([](const TrialRecord& r) { return r.bp_converged; }));
    switch (cfg.command) {
      case Command::Identity: {
        const auto res = collect([](const TrialRecord& r) { return *r.identity_residual; }, all);
        row.emplace_back("mean_identity_residual", mean_of(res));
        row.emplace_back("max_identity_residual", max_of(res));
        row.emplace_back("mean_loops", mean_of(collect(
                                           [](const TrialRecord& r) { return static_cast<double>(*r.loops); },
                                           all)));
        break;
      }
      case Command::Theorem1: {
        const auto g1 = collect(gap1, all);
        row.emplace_back("mean_gap1", mean_of(g1));
        row.emplace_back("max_gap1", max_of(g1));
        row.emplace_back("expander_fraction", fraction(on_expander));
        row.emplace_back("high_noise_fraction", fraction([](const TrialRecord& r) { return r.high_noise; }));
        break;
      }
      case Command::Theorem2: {
        const auto g1 = collect(gap1, on_expander);
        const auto g2 = collect([](const TrialRecord& r) { return *r.gap2; }, on_expander);
        row.emplace_back("expander_trials", static_cast<std::uint64_t>(g1.size()));
        row.emplace_back("mean_gap1", mean_of(g1));
        row.emplace_back("mean_gap2", mean_of(g2));
        std::size_t le = 0;
        for (std::size_t k = 0; k < g1.size(); ++k) le += g2[k] <= g1[k] ? 1 : 0;
        row.emplace_back("gap2_le_gap1_fraction",
                         g1.empty() ? kNaN : static_cast<double>(le) / static_cast<double>(g1.size()));
        row.emplace_back("mean_q", mean_of(collect([](const TrialRecord& r) { return *r.q; }, on_expander)));
        break;
      }
      case Command::Bounds: {
        std::uint64_t loops = 0, kbar = 0, polys = 0, poly_bound = 0, degree = 0;
        double worst = 0.0;
        for (const auto* r : ok) {
          loops += r->bounds->loops_checked;
          kbar += r->bounds->activity_bound_violations;
          worst = std::max(worst, r->bounds->worst_activity_ratio);
          if (r->expander.value_or(false)) {
            polys += r->bounds->polymers_checked;
            poly_bound += r->bounds->polymer_bound_violations;
            degree += r->bounds->degree_violations;
          }
        }
        row.emplace_back("expander_fraction", fraction(on_expander));
        row.emplace_back("loops_checked", loops);
        row.emplace_back("activity_bound_violations", kbar);
        row.emplace_back("worst_activity_ratio", worst);
        row.emplace_back("polymers_checked", polys);
        row.emplace_back("polymer_bound_violations", poly_bound);
        row.emplace_back("degree_violations", degree);
        row.emplace_back("max_q", max_of(collect([](const TrialRecord& r) { return *r.q; }, all)));
        break;
      }
      case Command::Census: {
        row.emplace_back("mean_nonempty_loops",
                         mean_of(collect(
                             [](const TrialRecord& r) { return static_cast<double>(r.census->nonempty_loops); },
                             all)));
        row.emplace_back("mean_abs_remainder",
                         mean_of(collect([](const TrialRecord& r) { return std::fabs(r.census->remainder); }, all)));
        row.emplace_back("mean_markov_rhs",
                         mean_of(collect([](const TrialRecord& r) { return r.census->markov_rhs.value_or(kNaN); },
                                         all)));
        break;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace loopcorr
