#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loopcorr/error.hpp"
#include "loopcorr/harness.hpp"

namespace loopcorr {

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string json_value(const Value& v) {
  return std::visit(
      Overloaded{
          [](std::monostate) -> std::string { return "null"; },
          [](bool b) -> std::string { return b ? "true" : "false"; },
          [](std::int64_t x) { return std::to_string(x); },
          [](std::uint64_t x) { return std::to_string(x); },
          [](double x) { return number(x); },
          [](const std::string& s) { return json_string(s); },
          [](const std::vector<double>& xs) {
            std::string out = "[";
            for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + number(xs[k]);
            return out + "]";
          },
          [](const std::vector<std::int64_t>& xs) {
            std::string out = "[";
            for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
            return out + "]";
          },
          [](const std::map<std::string, std::uint64_t>& m) {
            std::string out = "{";
            bool first = true;
            for (const auto& [k, c] : m) {
              out += (first ? "" : ",") + json_string(k) + ":" + std::to_string(c);
              first = false;
            }
            return out + "}";
          },
      },
      v);
}

std::string csv_cell(const Value& v) {
  std::string raw = std::visit(
      Overloaded{
          [](std::monostate) -> std::string { return ""; },
          [](bool b) -> std::string { return b ? "true" : "false"; },
          [](std::int64_t x) { return std::to_string(x); },
          [](std::uint64_t x) { return std::to_string(x); },
          [](double x) { return std::isfinite(x) ? number(x) : std::string(); },
          [](const std::string& s) { return s; },
          [](const std::vector<double>& xs) {
            std::string out;
            for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ";" : "") + number(xs[k]);
            return out;
          },
          [](const std::vector<std::int64_t>& xs) {
            std::string out;
            for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ";" : "") + std::to_string(xs[k]);
            return out;
          },
          [](const std::map<std::string, std::uint64_t>& m) {
            std::string out;
            for (const auto& [k, c] : m) out += (out.empty() ? "" : ";") + k + ":" + std::to_string(c);
            return out;
          },
      },
      v);
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string json_object(const Row& row, const std::string& indent) {
  std::string out = "{";
  for (std::size_t k = 0; k < row.size(); ++k) {
    out += (k ? ",\n" : "\n") + indent + "  " + json_string(row[k].first) + ": " + json_value(row[k].second);
  }
  return out + "\n" + indent + "}";
}

template <class T>
Value opt(const std::optional<T>& v) {
  if (!v) return std::monostate{};
  if constexpr (std::is_same_v<T, int>) {
    return static_cast<std::int64_t>(*v);
  } else {
    return *v;
  }
}

}  // namespace

Row config_fields(const ExperimentConfig& cfg) {
  std::vector<std::int64_t> ns(cfg.n.begin(), cfg.n.end());
  Row row{
      {"command", std::string(to_string(cfg.command))},
      {"l", std::int64_t{cfg.l}},
      {"r", std::int64_t{cfg.r}},
      {"n", ns},
      {"p", cfg.channel_p()},
      {"h", cfg.channel_h()},
      {"trials", std::int64_t{cfg.trials}},
      {"seed", cfg.seed},
      {"kappa", cfg.resolved_kappa()},
      {"lambda", opt(cfg.lambda)},
      {"zeta0", cfg.zeta0},
      {"slack", cfg.slack},
      {"alpha_t", cfg.alpha_t},
      {"alpha_r", cfg.alpha_r},
      {"beta_s", cfg.beta_s},
      {"mayer_order", std::int64_t{cfg.mayer_order}},
      {"bp_tol", cfg.bp.tol},
      {"bp_max_iter", std::int64_t{cfg.bp.max_iter}},
      {"bp_damping", cfg.bp.damping},
      {"bp_clamp", cfg.bp.clamp},
      {"max_kernel_dimension", std::int64_t{cfg.exact.max_kernel_dimension}},
      {"max_loops", cfg.loops.max_loops},
      {"max_polymers", cfg.max_polymers},
      {"max_mayer_polymers", cfg.max_mayer_polymers},
      {"expander_subset_cap", cfg.expander_subset_cap},
      {"format", std::string(to_string(cfg.format))},
      {"record_timing", cfg.record_timing},
  };
  return row;
}

Row record_fields(const TrialRecord& rec, Command command) {
  Row row{
      {"n", std::int64_t{rec.n}},
      {"trial", std::int64_t{rec.trial}},
      {"graph_seed", rec.graph_seed},
      {"channel_seed", rec.channel_seed},
      {"rank", std::int64_t{rec.rank}},
      {"flips", std::int64_t{rec.flips}},
      {"h", rec.h},
      {"kappa", rec.kappa},
      {"lambda", rec.lambda},
      {"expander", opt(rec.expander)},
      {"bp_converged", rec.bp_converged},
      {"bp_iterations", std::int64_t{rec.bp_iterations}},
      {"bp_residual", rec.bp_residual},
      {"high_noise", rec.high_noise},
      {"f_bethe", rec.f_bethe},
      {"log_z_per_n", rec.log_z_per_n},
      {"gap1", rec.gap1},
  };
  switch (command) {
    case Command::Identity:
      row.emplace_back("loop_sum", opt(rec.loop_sum));
      row.emplace_back("loops", opt(rec.loops));
      row.emplace_back("identity_residual", opt(rec.identity_residual));
      break;
    case Command::Theorem1:
      break;
    case Command::Theorem2:
      row.emplace_back("z_p", opt(rec.z_p));
      row.emplace_back("gap2", opt(rec.gap2));
      row.emplace_back("q", opt(rec.q));
      row.emplace_back("polymer_count", opt(rec.polymer_count));
      break;
    case Command::Bounds: {
      row.emplace_back("z_p", opt(rec.z_p));
      row.emplace_back("q", opt(rec.q));
      row.emplace_back("q_at_one", opt(rec.q_at_one));
      row.emplace_back("polymer_count", opt(rec.polymer_count));
      const BoundsSummary b = rec.bounds.value_or(BoundsSummary{});
      const bool have = rec.bounds.has_value();
      auto u = [&](std::uint64_t x) -> Value { return have ? Value{x} : Value{}; };
      auto d = [&](double x) -> Value { return have ? Value{x} : Value{}; };
      row.emplace_back("loops_checked", u(b.loops_checked));
      row.emplace_back("activity_bound_violations", u(b.activity_bound_violations));
      row.emplace_back("worst_activity_ratio", d(b.worst_activity_ratio));
      row.emplace_back("exponent_c", d(b.exponent_c));
      row.emplace_back("polymers_checked", u(b.polymers_checked));
      row.emplace_back("polymer_bound_violations", u(b.polymer_bound_violations));
      row.emplace_back("degree_violations", u(b.degree_violations));
      row.emplace_back("expansion_violations", u(b.expansion_violations));
      row.emplace_back("type_expansion_violations", u(b.type_expansion_violations));
      row.emplace_back("mayer_errors", have ? Value{b.mayer_errors} : Value{});
      break;
    }
    case Command::Census: {
      row.emplace_back("z_p", opt(rec.z_p));
      row.emplace_back("loop_sum", opt(rec.loop_sum));
      const CensusSummary c = rec.census.value_or(CensusSummary{});
      const bool have = rec.census.has_value();
      auto u = [&](std::uint64_t x) -> Value { return have ? Value{x} : Value{}; };
      auto d = [&](double x) -> Value { return have ? Value{x} : Value{}; };
      row.emplace_back("nonempty_loops", u(c.nonempty_loops));
      row.emplace_back("types", u(c.types));
      row.emplace_back("domain_types", u(c.domain_types));
      row.emplace_back("domain_loops", u(c.domain_loops));
      row.emplace_back("markov_rhs", opt(c.markov_rhs));
      row.emplace_back("remainder", d(c.remainder));
      row.emplace_back("remainder_abs", d(c.remainder_abs));
      row.emplace_back("remainder_bound", opt(c.remainder_bound));
      row.emplace_back("census", have ? Value{c.counts} : Value{});
      break;
    }
  }
  if (rec.timing_ms) row.emplace_back("timing_ms", *rec.timing_ms);
  row.emplace_back("error", opt(rec.error));
  return row;
}

std::string to_json(const ResultSet& results) {
  std::string out = "{\n  \"config\": " + json_object(config_fields(results.config), "  ") + ",\n";
  out += "  \"records\": [";
  for (std::size_t k = 0; k < results.records.size(); ++k) {
    out += (k ? ",\n    " : "\n    ") + json_object(record_fields(results.records[k], results.config.command), "    ");
  }
  out += results.records.empty() ? "],\n" : "\n  ],\n";
  out += "  \"aggregates\": [";
  for (std::size_t k = 0; k < results.aggregates.size(); ++k) {
    out += (k ? ",\n    " : "\n    ") + json_object(results.aggregates[k], "    ");
  }
  out += results.aggregates.empty() ? "]\n" : "\n  ]\n";
  return out + "}\n";
}

std::string to_csv(const ResultSet& results) {
  std::string out;
  TrialRecord blank;
  if (results.config.record_timing) blank.timing_ms = 0.0;
  const Row header = record_fields(blank, results.config.command);
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k].first;
  out += '\n';
  for (const auto& rec : results.records) {
    const Row row = record_fields(rec, results.config.command);
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_cell(row[k].second);
    out += '\n';
  }
  return out;
}

std::string format_results(const ResultSet& results, OutputFormat format) {
  return format == OutputFormat::Json ? to_json(results) : to_csv(results);
}

void write_results(const ResultSet& results, OutputFormat format, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  file << format_results(results, format);
  file.flush();
  if (!file) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace loopcorr
