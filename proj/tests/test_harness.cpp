#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/harness.hpp"

using namespace loopcorr;

namespace {

ExperimentConfig small(Command c) {
  ExperimentConfig cfg;
  cfg.command = c;
  cfg.n = {6, 8};
  cfg.trials = 3;
  cfg.seed = 17;
  cfg.h = 0.05;
  return cfg;
}

bool same_value(const Value& v, const nlohmann::json& j) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return j.is_null();
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(x) ? (j.is_number() && j.get<double>() == x) : j.is_null();
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          if (!j.is_array() || j.size() != x.size()) return false;
          for (std::size_t k = 0; k < x.size(); ++k) {
            if (j[k].get<double>() != x[k]) return false;
          }
          return true;
        } else {
          return j == nlohmann::json(x);
        }
      },
      v);
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig cfg;
  cfg.command = Command::Bounds;
  cfg.n = {6, 8, 12};
  cfg.h = 0.1 + 1e-17;
  cfg.kappa = 0.5;
  cfg.lambda = 1.0 / 3.0;
  cfg.zeta0 = 2.5;
  cfg.workers = 3;
  cfg.format = OutputFormat::Csv;
  cfg.out = "results.csv";
  cfg.record_timing = true;
  const auto back = ExperimentConfig::parse(cfg.serialize());
  CHECK(back == cfg);
  CHECK(back.lambda.value() == cfg.lambda.value());
  CHECK(back.n == cfg.n);
  CHECK(ExperimentConfig::parse(ExperimentConfig{}.serialize()) == ExperimentConfig{});
}

TEST_CASE("config parse errors") {
  auto kind = [](const std::string& text) {
    try {
      ExperimentConfig::parse(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConsistencyFailure;
  };
  CHECK(kind("bogus = 1\n") == ErrorKind::ParseError);
  CHECK(kind("l = three\n") == ErrorKind::ParseError);
  CHECK(kind("n = 6,,8\n") == ErrorKind::ParseError);
  CHECK(kind("just text\n") == ErrorKind::ParseError);
  const auto cfg = ExperimentConfig::parse("# comment\n  l = 3  \nr=4 # trailing\nn = 8, 12\n");
  CHECK(cfg.r == 4);
  CHECK(cfg.n == std::vector<int>{8, 12});
}

TEST_CASE("config validation") {
  auto fails = [](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    try {
      cfg.validate();
    } catch (const Error&) {
      return true;
    }
    return false;
  };
  CHECK_FALSE(fails([](ExperimentConfig&) {}));
  CHECK(fails([](ExperimentConfig& c) { c.n = {5}; c.r = 4; }));
  CHECK(fails([](ExperimentConfig& c) { c.p = 0.4; c.h = 0.1; }));
  CHECK(fails([](ExperimentConfig& c) { c.p = 0.0; }));
  CHECK(fails([](ExperimentConfig& c) { c.kappa = 1.5; }));
  CHECK(fails([](ExperimentConfig& c) { c.workers = 0; }));
  CHECK(fails([](ExperimentConfig& c) { c.alpha_r = 1.0; }));
  CHECK(fails([](ExperimentConfig& c) { c.n = {80}; }));  // kernel too large for the exact oracle
  CHECK(fails([](ExperimentConfig& c) { c.mayer_order = 6; }));
}

TEST_CASE("zero trials give an empty table") {
  auto cfg = small(Command::Theorem1);
  cfg.trials = 0;
  const auto res = run_experiment(cfg);
  CHECK(res.records.empty());
  REQUIRE(res.aggregates.size() == 2);
  const auto json = nlohmann::json::parse(to_json(res));
  CHECK(json["records"].empty());
  CHECK(json["aggregates"][0]["trials"] == 0);
}

TEST_CASE("h = 0 closed form for gap1") {
  auto cfg = small(Command::Theorem1);
  cfg.h.reset();
  cfg.p = 0.5;
  cfg.n = {12, 16};
  cfg.trials = 5;
  for (const auto& rec : run_experiment(cfg).records) {
    REQUIRE_FALSE(rec.error);
    const int m = rec.n * cfg.l / cfg.r;
    const double want = std::fabs(double(m - rec.rank) / rec.n) * std::log(2.0);
    CHECK(std::fabs(rec.gap1 - want) <= 1e-12);
    if (rec.rank == m) CHECK(rec.gap1 < 1e-14);
  }
}

TEST_CASE("determinism across runs and worker counts") {
  for (Command c : {Command::Theorem1, Command::Theorem2, Command::Identity, Command::Bounds, Command::Census}) {
    auto cfg = small(c);
    const auto a = to_json(run_experiment(cfg));
    const auto b = to_json(run_experiment(cfg));
    cfg.workers = 4;
    const auto d = run_experiment(cfg);
    CHECK(a == b);
    cfg.workers = 1;  // the config block records the worker count
    CHECK(to_json(ResultSet{cfg, d.records, d.aggregates}) == a);
  }
}

TEST_CASE("trials are independent of each other") {
  auto cfg = small(Command::Theorem2);
  const auto all = run_experiment(cfg);
  const auto solo = run_trial(cfg, 8, 2);
  const auto& rec = all.records[5];
  REQUIRE(rec.n == 8);
  REQUIRE(rec.trial == 2);
  CHECK(record_fields(solo, cfg.command) == record_fields(rec, cfg.command));
}

TEST_CASE("records satisfy the gap triangle inequality") {
  auto cfg = small(Command::Theorem2);
  cfg.lambda = 0.75;
  cfg.trials = 4;
  for (const auto& rec : run_experiment(cfg).records) {
    REQUIRE_FALSE(rec.error);
    REQUIRE(rec.gap2);
    CHECK(*rec.gap2 <= rec.gap1 + std::fabs(std::log(*rec.z_p) / rec.n) + 1e-15);
  }
}

TEST_CASE("identity records are exact") {
  auto cfg = small(Command::Identity);
  for (const auto& rec : run_experiment(cfg).records) {
    REQUIRE_FALSE(rec.error);
    CHECK(*rec.identity_residual < 1e-9);
  }
}

TEST_CASE("JSON output re-parses to the in-memory records") {
  for (Command c : {Command::Theorem2, Command::Bounds, Command::Census}) {
    const auto res = run_experiment(small(c));
    const auto json = nlohmann::json::parse(to_json(res));
    REQUIRE(json["records"].size() == res.records.size());
    for (std::size_t k = 0; k < res.records.size(); ++k) {
      const Row row = record_fields(res.records[k], c);
      const auto& obj = json["records"][k];
      CHECK(obj.size() == row.size());
      for (const auto& [key, value] : row) {
        REQUIRE(obj.contains(key));
        CHECK_MESSAGE(same_value(value, obj[key]), key);
      }
    }
    for (const auto& [key, value] : config_fields(res.config)) {
      CHECK_MESSAGE(same_value(value, json["config"][key]), key);
    }
  }
}

TEST_CASE("CSV has one row per trial") {
  auto cfg = small(Command::Bounds);
  const auto res = run_experiment(cfg);
  const auto csv = to_csv(res);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + static_cast<std::size_t>(cfg.trials) * cfg.n.size());
}

TEST_CASE("write errors name the path") {
  const auto res = run_experiment(small(Command::Theorem1));
  try {
    write_results(res, OutputFormat::Json, "/nonexistent-dir/out.json");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.json") != std::string::npos);
  }
}
