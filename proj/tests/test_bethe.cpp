#include <cmath>

#include "doctest.h"
#include "loopcorr/bethe.hpp"
#include "loopcorr/channel.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"
#include "test_support.hpp"

using namespace loopcorr;

TEST_CASE("terms at zero messages") {
  const double ln2 = std::log(2.0);
  for (int r : {2, 4, 6}) {
    const std::vector<double> zeros(static_cast<std::size_t>(r), 0.0);
    CHECK(check_term(zeros) == doctest::Approx((r - 1) * ln2).epsilon(1e-15));
  }
  CHECK(variable_term(0.0, std::vector<double>(3, 0.0)) == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(edge_term(0.0, 0.0) == doctest::Approx(ln2).epsilon(1e-15));
}

TEST_CASE("check term near saturation") {
  const double t = 1.0 - 1e-3;
  const double eta = std::atanh(t);
  const std::vector<double> in{eta, eta};
  const long double tl = t;
  const long double want = std::log(0.5L * (1.0L + tl * tl)) + 2.0L * std::log(2.0L * std::cosh(static_cast<long double>(eta)));
  CHECK(std::isfinite(check_term(in)));
  CHECK(check_term(in) == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  CHECK(check_term(in) == doctest::Approx(2 * ln_2cosh(eta)).epsilon(1e-3));
  CHECK_THROWS_AS(check_term(std::vector<double>{800.0, -800.0}), Error);
}

TEST_CASE("edge term symmetry") {
  for (double a : {-1.3, 0.0, 0.2, 4.0}) {
    for (double b : {-0.7, 0.1, 2.5}) CHECK(edge_term(a, b) == edge_term(b, a));
  }
}

TEST_CASE("zero messages give (1 - l/r) ln 2") {
  for (auto [n, l, r] : {std::array{6, 3, 6}, std::array{8, 3, 4}, std::array{12, 3, 6}, std::array{10, 2, 5}}) {
    const auto g = generate_regular(n, l, r, 5);
    const std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    CHECK(std::fabs(bethe_free_energy(g, h, MessageSet::zeros(g)) - (1.0 - double(l) / r) * std::log(2.0)) < 1e-14);
  }
  const auto g = generate_regular(6, 3, 6, 1);
  CHECK(bethe_free_energy(g, std::vector<double>(6, 0.0), MessageSet::zeros(g)) ==
        doctest::Approx(0.3465736).epsilon(1e-7));
}

TEST_CASE("uniform fixed point matches the scalar expression") {
  const int l = 3, r = 6, n = 12;
  const auto g = generate_regular(n, l, r, 4);
  const std::vector<double> h(n, 0.05);
  const auto res = bp_solve(g, h);
  REQUIRE(res.converged);
  const double eta = res.messages.eta[0];
  const double hat = res.messages.eta_hat[0];
  const double fa = check_term(std::vector<double>(r, eta));
  const double fi = variable_term(0.05, std::vector<double>(l, hat));
  const double want = double(l) / r * fa + fi - l * edge_term(eta, hat);
  CHECK(bethe_free_energy(g, h, res.messages) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("relabeling and global sign flip leave f unchanged") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = generate_regular(12, 3, 6, seed);
    auto f = sample_bsc(12, 0.4, seed).fields();
    const auto res = bp_solve(g, f);
    const double base = bethe_free_energy(g, f, res.messages);

    const auto rl = testing::random_relabeling(g, seed);
    std::vector<double> f2(12);
    for (int i = 0; i < 12; ++i) f2[rl.var_perm[i]] = f[i];
    MessageSet m2 = res.messages;
    for (int e = 0; e < g.num_edges(); ++e) {
      m2.eta[rl.edge_map[e]] = res.messages.eta[e];
      m2.eta_hat[rl.edge_map[e]] = res.messages.eta_hat[e];
    }
    CHECK(bethe_free_energy(rl.graph, f2, m2) == doctest::Approx(base).epsilon(1e-14));

    MessageSet neg = res.messages;
    for (double& x : neg.eta) x = -x;
    for (double& x : neg.eta_hat) x = -x;
    for (double& x : f) x = -x;
    CHECK(bethe_free_energy(g, f, neg) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("trivial sentinel is rejected") {
  const auto g = generate_regular(6, 3, 6, 1);
  CHECK_THROWS_AS(bethe_free_energy(g, std::vector<double>(6, 0.1), MessageSet::trivial_solution()), Error);
}
