#include "loopcorr/gf2.hpp"

#include <bit>
#include <utility>

#include "loopcorr/error.hpp"

namespace loopcorr {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InfeasibleParameters: return "infeasible parameters";
    case ErrorKind::RejectionBudgetExhausted: return "rejection budget exhausted";
    case ErrorKind::CapExceeded: return "enumeration cap exceeded";
    case ErrorKind::DomainError: return "domain error";
    case ErrorKind::SingularInput: return "singular input";
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::NoRoot: return "no root";
    case ErrorKind::ConsistencyFailure: return "internal consistency failure";
    case ErrorKind::IoError: return "i/o error";
  }
  return "unknown error";
}

bool BitVector::any() const noexcept {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<int> BitVector::support() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
  return out;
}

BitVector BinaryMatrix::multiply(const BitVector& x) const {
  BitVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto& rw = rows_[r].words();
    const auto& xw = x.words();
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < rw.size(); ++w) acc ^= rw[w] & xw[w];
    out.set(r, std::popcount(acc) & 1);
  }
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns in row order.
std::vector<std::size_t> rref(std::vector<BitVector>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols && next < rows.size(); ++c) {
    std::size_t sel = next;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[next]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && rows[r].get(c)) rows[r] ^= rows[next];
    }
    pivots.push_back(c);
    ++next;
  }
  return pivots;
}

std::vector<BitVector> copy_rows(const BinaryMatrix& m) {
  std::vector<BitVector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

}  // namespace

std::size_t gf2_rank(const BinaryMatrix& m) {
  auto rows = copy_rows(m);
  return rref(rows, m.cols()).size();
}

std::vector<BitVector> gf2_nullspace(const BinaryMatrix& m) {
  auto rows = copy_rows(m);
  const auto pivots = rref(rows, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<BitVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    BitVector v(m.cols());
    v.set(free, true);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      if (rows[k].get(free)) v.set(pivots[k], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace loopcorr
