#include "loopcorr/bethe.hpp"

#include <cmath>
#include <vector>

#include "loopcorr/error.hpp"
#include "loopcorr/numeric.hpp"

namespace loopcorr {

double check_term(std::span<const double> incoming_eta) {
  double prod = 1.0;
  CompensatedSum s;
  for (double eta : incoming_eta) {
    prod *= std::tanh(eta);
    s.add(ln_2cosh(eta));
  }
  if (1.0 + prod <= 0.0) {
    throw Error(ErrorKind::SingularInput, "check product of tanh equals -1");
  }
  s.add(std::log1p(prod) - std::log(2.0));
  return s.value();
}

double check_term(const TannerGraph& g, int a, const MessageSet& msgs) {
  if (msgs.trivial) throw Error(ErrorKind::SingularInput, "trivial solution has infinite messages");
  std::vector<double> in;
  for (int e : g.check_edges(a)) in.push_back(msgs.eta[e]);
  return check_term(in);
}

double variable_term(double field, std::span<const double> incoming_eta_hat) {
  double total = field;
  for (double v : incoming_eta_hat) total += v;
  return ln_2cosh(total);
}

double variable_term(const TannerGraph& g, int i, double field, const MessageSet& msgs) {
  if (msgs.trivial) throw Error(ErrorKind::SingularInput, "trivial solution has infinite messages");
  std::vector<double> in;
  for (int e : g.var_edges(i)) in.push_back(msgs.eta_hat[e]);
  return variable_term(field, in);
}

double edge_term(double eta, double eta_hat) { return ln_2cosh(eta + eta_hat); }

double bethe_free_energy(const TannerGraph& g, std::span<const double> fields,
                         const MessageSet& msgs) {
  if (msgs.trivial) throw Error(ErrorKind::SingularInput, "trivial solution has infinite messages");
  if (g.num_vars() == 0) throw Error(ErrorKind::DomainError, "graph has no variables");
  CompensatedSum total;
  for (int a = 0; a < g.num_checks(); ++a) total.add(check_term(g, a, msgs));
  for (int i = 0; i < g.num_vars(); ++i) total.add(variable_term(g, i, fields[i], msgs));
  for (int e = 0; e < g.num_edges(); ++e) total.add(-edge_term(msgs.eta[e], msgs.eta_hat[e]));
  return total.value() / g.num_vars();
}

}  // namespace loopcorr
