#include "doctest.h"
#include "loopcorr/gf2.hpp"
#include "loopcorr/rng.hpp"

using namespace loopcorr;

namespace {

BinaryMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  BinaryMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.below(2) == 1);
  }
  return m;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  BinaryMatrix id(3, 3);
  for (int i = 0; i < 3; ++i) id.set(i, i, true);
  CHECK(gf2_rank(id) == 3);

  BinaryMatrix same(3, 6);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 6; ++c) same.set(r, c, true);
  }
  CHECK(gf2_rank(same) == 1);

  CHECK(gf2_rank(BinaryMatrix(4, 5)) == 0);
}

TEST_CASE("rank counts dependencies over GF(2)") {
  // Third row is the sum of the first two.
  BinaryMatrix m(3, 4);
  m.set(0, 0, true);
  m.set(0, 1, true);
  m.set(1, 1, true);
  m.set(1, 2, true);
  m.set(2, 0, true);
  m.set(2, 2, true);
  CHECK(gf2_rank(m) == 2);
}

TEST_CASE("nullspace vectors are independent solutions") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t rows = 3 + seed % 5;
    const std::size_t cols = 5 + seed % 70;
    const auto m = random_matrix(rows, cols, seed);
    const auto basis = gf2_nullspace(m);
    CHECK(basis.size() == cols - gf2_rank(m));
    CHECK(gf2_rank(m) <= std::min(rows, cols));
    BinaryMatrix stacked(basis.size(), cols);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      CHECK_FALSE(m.multiply(basis[k]).any());
      for (std::size_t c = 0; c < cols; ++c) stacked.set(k, c, basis[k].get(c));
    }
    CHECK(gf2_rank(stacked) == basis.size());
  }
}

TEST_CASE("bit vector basics") {
  BitVector v(130);
  v.set(0, true);
  v.set(64, true);
  v.flip(129);
  CHECK(v.count() == 3);
  CHECK(v.support() == std::vector<int>{0, 64, 129});
  v ^= v;
  CHECK_FALSE(v.any());
}
