#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "loopcorr/error.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

std::string save_alist(const TannerGraph& g) {
  std::ostringstream os;
  os << g.num_vars() << ' ' << g.num_checks() << '\n';
  os << g.max_var_degree() << ' ' << g.max_check_degree() << '\n';
  for (int i = 0; i < g.num_vars(); ++i) os << (i ? " " : "") << g.var_degree(i);
  os << '\n';
  for (int a = 0; a < g.num_checks(); ++a) os << (a ? " " : "") << g.check_degree(a);
  os << '\n';
  for (int i = 0; i < g.num_vars(); ++i) {
    const auto nb = g.var_neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) os << (k ? " " : "") << nb[k] + 1;
    os << '\n';
  }
  for (int a = 0; a < g.num_checks(); ++a) {
    const auto nb = g.check_neighbors(a);
    for (std::size_t k = 0; k < nb.size(); ++k) os << (k ? " " : "") << nb[k] + 1;
    os << '\n';
  }
  return os.str();
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(const std::string& text) : text_(text) {}

  int next(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) fail(std::string("unexpected end of input reading ") + what);
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || (ptr != end && !std::isspace(static_cast<unsigned char>(*ptr)))) {
      fail(std::string("malformed integer reading ") + what);
    }
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  [[noreturn]] static void fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

TannerGraph load_alist(const std::string& text) {
  TokenReader in(text);
  const int n = in.next("header n");
  const int m = in.next("header m");
  const int l = in.next("header l");
  const int r = in.next("header r");
  if (n <= 0 || m <= 0 || l <= 0 || r <= 0) TokenReader::fail("malformed header: nonpositive size");
  if (static_cast<long long>(n) * l != static_cast<long long>(m) * r) {
    TokenReader::fail("degree mismatch: n*l != m*r");
  }
  for (int i = 0; i < n; ++i) {
    if (in.next("column degree") != l) {
      TokenReader::fail("degree mismatch: column " + std::to_string(i + 1) + " degree != l");
    }
  }
  for (int a = 0; a < m; ++a) {
    if (in.next("row degree") != r) {
      TokenReader::fail("degree mismatch: row " + std::to_string(a + 1) + " degree != r");
    }
  }

  std::set<std::pair<int, int>> from_cols;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < l; ++k) {
      const int a = in.next("column entry");
      if (a < 1 || a > m) {
        TokenReader::fail("index " + std::to_string(a) + " out of range [1," + std::to_string(m) +
                          "] in column " + std::to_string(i + 1));
      }
      if (!from_cols.emplace(i, a - 1).second) TokenReader::fail("repeated index in column list");
      edges.push_back({i, a - 1});
    }
  }
  std::set<std::pair<int, int>> from_rows;
  for (int a = 0; a < m; ++a) {
    for (int k = 0; k < r; ++k) {
      const int i = in.next("row entry");
      if (i < 1 || i > n) {
        TokenReader::fail("index " + std::to_string(i) + " out of range [1," + std::to_string(n) +
                          "] in row " + std::to_string(a + 1));
      }
      if (!from_rows.emplace(i - 1, a).second) TokenReader::fail("repeated index in row list");
    }
  }
  if (from_rows != from_cols) TokenReader::fail("row and column lists describe different edges");
  if (!in.at_end()) TokenReader::fail("trailing data after row lists");
  return TannerGraph::from_edges(n, m, std::move(edges));
}

}  // namespace loopcorr
