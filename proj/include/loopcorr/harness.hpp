#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopcorr/bp.hpp"
#include "loopcorr/exact.hpp"
#include "loopcorr/loop_series.hpp"
#include "loopcorr/polymer.hpp"

namespace loopcorr {

enum class Command { Identity, Theorem1, Theorem2, Bounds, Census };
enum class OutputFormat { Json, Csv };

const char* to_string(Command c) noexcept;
Command parse_command(const std::string& s);
const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_format(const std::string& s);

struct ExperimentConfig {
  Command command = Command::Theorem1;
  int l = 3;
  int r = 6;
  std::vector<int> n{24, 32, 40};
  /// Channel: at most one of p and h; p = 0.45 when neither is set.
  std::optional<double> p;
  std::optional<double> h;
  int trials = 50;
  std::uint64_t seed = 1;
  /// Default: midpoint of the admissible interval.
  std::optional<double> kappa;
  /// Default: lambda0 for theorem1; for theorem2, bounds and census the
  /// largest lambda at which each sampled graph is a verified expander.
  std::optional<double> lambda;
  double zeta0 = 2.0;
  double slack = 2.0;
  double alpha_t = 1.1;
  double alpha_r = 0.9;
  double beta_s = 1.1;
  int mayer_order = 4;
  BpOptions bp;
  ExactCaps exact;
  LoopCaps loops;
  std::uint64_t max_polymers = 5'000'000;
  std::uint64_t max_mayer_polymers = 300;
  std::uint64_t expander_subset_cap = 10'000'000;
  std::string out;
  OutputFormat format = OutputFormat::Json;
  int workers = 1;
  bool record_timing = false;

  /// Flat "key = value" text; '#' starts a comment. Unknown keys and
  /// malformed values raise Error(ParseError).
  static ExperimentConfig parse(const std::string& text);
  /// Sets one key from its text form (shared by the file and the CLI).
  void set(const std::string& key, const std::string& value);
  std::string serialize() const;
  /// Throws Error(InfeasibleParameters) or Error(DomainError).
  void validate() const;

  double channel_p() const;
  double channel_h() const;
  double resolved_kappa() const;
  BoundConstants bound_constants() const;
  PolymerCaps polymer_caps() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

struct CensusSummary {
  std::uint64_t nonempty_loops = 0;
  std::uint64_t types = 0;
  std::uint64_t domain_types = 0;
  std::uint64_t domain_loops = 0;
  std::optional<double> markov_rhs;
  double remainder = 0.0;
  double remainder_abs = 0.0;
  std::optional<double> remainder_bound;
  std::map<std::string, std::uint64_t> counts;  ///< by type key
};

struct BoundsSummary {
  std::uint64_t loops_checked = 0;
  std::uint64_t activity_bound_violations = 0;
  double worst_activity_ratio = 0.0;  ///< max |K| / K-bar
  double exponent_c = 0.0;
  std::uint64_t polymers_checked = 0;
  std::uint64_t polymer_bound_violations = 0;
  std::uint64_t degree_violations = 0;
  std::uint64_t expansion_violations = 0;
  std::uint64_t type_expansion_violations = 0;
  std::vector<double> mayer_errors;  ///< |S_M - (1/n) ln Z_p|, empty when skipped
};

struct TrialRecord {
  int n = 0;
  int trial = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t channel_seed = 0;
  int rank = 0;
  int flips = 0;
  double h = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  std::optional<bool> expander;  ///< unset when the exhaustive check hit its cap
  bool bp_converged = false;
  int bp_iterations = 0;
  double bp_residual = 0.0;
  bool high_noise = false;
  double f_bethe = 0.0;
  double log_z_per_n = 0.0;
  double gap1 = 0.0;
  std::optional<double> z_p;
  std::optional<double> gap2;
  std::optional<double> q;
  std::optional<double> q_at_one;
  std::optional<std::uint64_t> polymer_count;
  std::optional<double> loop_sum;
  std::optional<std::uint64_t> loops;
  std::optional<double> identity_residual;
  std::optional<BoundsSummary> bounds;
  std::optional<CensusSummary> census;
  std::optional<double> timing_ms;
  std::optional<std::string> error;
};

/// One output value. Doubles are written with 17 significant digits,
/// non-finite values as null.
using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string,
                           std::vector<double>, std::vector<std::int64_t>,
                           std::map<std::string, std::uint64_t>>;
using Row = std::vector<std::pair<std::string, Value>>;

struct ResultSet {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<Row> aggregates;
};

/// Runs one trial of the configured command for a given n.
TrialRecord run_trial(const ExperimentConfig& cfg, int n, int trial);

/// All trials for every n (up to cfg.workers threads), ordered by (n, trial),
/// with per-n aggregates.
ResultSet run_experiment(const ExperimentConfig& cfg);

ResultSet run_identity_suite(ExperimentConfig cfg);
ResultSet run_theorem1_sweep(ExperimentConfig cfg);
ResultSet run_theorem2_check(ExperimentConfig cfg);
ResultSet run_bounds(ExperimentConfig cfg);
ResultSet run_census(ExperimentConfig cfg);

std::vector<Row> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

Row config_fields(const ExperimentConfig& cfg);
/// Fields emitted for a record; the column set depends only on the command.
Row record_fields(const TrialRecord& rec, Command command);

std::string to_json(const ResultSet& results);
/// Records only; one header line plus one line per record.
std::string to_csv(const ResultSet& results);
std::string format_results(const ResultSet& results, OutputFormat format);
/// Writes to path; Error(IoError) naming the path on failure.
void write_results(const ResultSet& results, OutputFormat format, const std::string& path);

}  // namespace loopcorr
