#include <cmath>

#include "doctest.h"
#include "loopcorr/channel.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"

using namespace loopcorr;

TEST_CASE("half_llr values and domain") {
  CHECK(half_llr(0.5) == 0.0);
  CHECK(half_llr(0.1) == doctest::Approx(0.5 * std::log(9.0)).epsilon(1e-15));
  CHECK(half_llr(0.1) == doctest::Approx(1.0986123).epsilon(1e-7));
  CHECK_THROWS_AS(half_llr(0.0), Error);
  CHECK_THROWS_AS(half_llr(1.0), Error);
  double prev = half_llr(0.01);
  for (double p = 0.02; p < 1.0; p += 0.01) {
    const double h = half_llr(p);
    CHECK(h < prev);
    CHECK(half_llr(1.0 - p) == doctest::Approx(-h).epsilon(1e-12));
    prev = h;
  }
}

TEST_CASE("sample_bsc") {
  const auto quiet = sample_bsc(20, 1e-9, 3);
  CHECK(quiet.flips() == 0);

  const int n = 100000;
  const auto noisy = sample_bsc(n, 0.5, 4);
  const double frac = static_cast<double>(noisy.flips()) / n;
  CHECK(std::fabs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / n));

  const auto a = sample_bsc(50, 0.3, 9);
  const auto b = sample_bsc(50, 0.3, 9);
  CHECK(a.y == b.y);
  const auto f = a.fields();
  for (int i = 0; i < 50; ++i) {
    CHECK(std::fabs(f[i]) == doctest::Approx(a.h));
    CHECK((f[i] > 0) == (a.y[i] == 0));
  }
}

TEST_CASE("flipping every output bit negates the fields") {
  const auto a = realization_from_bits(10, 0.3, 0b1011001110);
  const auto b = realization_from_bits(10, 0.3, ~std::uint64_t{0b1011001110} & 0x3FF);
  const auto fa = a.fields();
  const auto fb = b.fields();
  for (int i = 0; i < 10; ++i) CHECK(fa[i] == -fb[i]);
}

TEST_CASE("enumerate_outputs") {
  const auto one = enumerate_outputs(1, 0.2);
  REQUIRE(one.size() == 2);
  CHECK(one.at(0).probability == doctest::Approx(0.8));
  CHECK(one.at(0).realization.y[0] == 0);
  CHECK(one.at(1).probability == doctest::Approx(0.2));
  CHECK(one.at(1).realization.y[0] == 1);

  for (double p : {0.1, 0.37, 0.5}) {
    CompensatedSum s;
    for (const auto& w : enumerate_outputs(2, p)) s.add(w.probability);
    CHECK(std::fabs(s.value() - 1.0) < 1e-12);
  }

  const auto big = enumerate_outputs(20, 0.3);
  CHECK(big.size() == 1048576);
  CompensatedSum s;
  for (std::uint64_t k = 0; k < big.size(); ++k) s.add(big.probability(k));
  CHECK(std::fabs(s.value() - 1.0) < 1e-12);

  CHECK_THROWS_AS(enumerate_outputs(23, 0.3), Error);
}
