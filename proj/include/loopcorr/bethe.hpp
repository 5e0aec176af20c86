#pragma once

#include <span>

#include "loopcorr/bp.hpp"
#include "loopcorr/tanner.hpp"

namespace loopcorr {

/// F_a = ln 1/2 (1 + prod_{i in da} tanh eta_{i->a}) + sum_{i in da} ln 2cosh eta_{i->a}.
/// Throws Error(SingularInput) when the product equals -1.
double check_term(std::span<const double> incoming_eta);
double check_term(const TannerGraph& g, int a, const MessageSet& msgs);

/// F_i = ln 2cosh(h_i + sum_{a in di} eta_hat_{a->i}).
double variable_term(double field, std::span<const double> incoming_eta_hat);
double variable_term(const TannerGraph& g, int i, double field, const MessageSet& msgs);

/// F_ia = ln 2cosh(eta_{i->a} + eta_hat_{a->i}).
double edge_term(double eta, double eta_hat);

/// f = (1/n)(sum_a F_a + sum_i F_i - sum_(i,a) F_ia), in nats per variable.
/// Terms are summed in node/edge index order.
double bethe_free_energy(const TannerGraph& g, std::span<const double> fields,
                         const MessageSet& msgs);

}  // namespace loopcorr
