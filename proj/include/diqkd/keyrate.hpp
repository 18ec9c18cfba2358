// keyrate.hpp
// Conditional entropies (bits) and the Devetak-Winter lower bound
// r_DW = H(A|E) - H(A|rest).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "diqkd/attack.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/noise.hpp"

namespace diqkd {

/// -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw domain_error("binary entropy argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Eve knows A on the local fraction q_L and nothing on the GHZ fraction:
/// P(A = E | E) = (1 + q_L)/2.
inline double h_a_given_e(const AttackDecomposition& att) { return binary_entropy((1.0 + att.q_l) / 2.0); }

/// Party 1's raw key against the parity of the others on a GHZ key round:
/// P(A = prod of others) = (1 + (2p-1)^n)/2.
inline double h_a_given_rest(Accuracy p, int n) {
  detail::require_violation_regime(p);
  if (n < 3) throw dimension_error("key rate needs n >= 3");
  return binary_entropy((1.0 + p.parity_bias(n)) / 2.0);
}

struct KeyRateReport {
  double h_a_given_e = 0.0;
  double h_a_given_rest = 0.0;
  double r_dw = 0.0;         // may be negative
  double r_effective = 0.0;  // max(0, r_dw); 0 when aborting
  bool abort = false;        // q_L_raw > 1: no SI violation, no key
  AttackDecomposition attack;
  double p = 1.0;
  int n = 3;
  std::optional<double> v;
};

namespace detail {

inline KeyRateReport assemble(const AttackDecomposition& att, double h_rest, double p, int n,
                              std::optional<double> v) {
  KeyRateReport r;
  r.attack = att;
  r.h_a_given_e = h_a_given_e(att);
  r.h_a_given_rest = h_rest;
  r.r_dw = r.h_a_given_e - r.h_a_given_rest;
  r.abort = att.aborts();
  r.r_effective = r.abort ? 0.0 : std::max(0.0, r.r_dw);
  r.p = p;
  r.n = n;
  r.v = v;
  return r;
}

}  // namespace detail

inline KeyRateReport dw_rate(Accuracy p, int n) {
  const auto att = local_weight_nparty(p, n);
  return detail::assemble(att, h_a_given_rest(p, n), p.value(), n, std::nullopt);
}

/// Werner source: P(A = BC) = [(1 + (2p-1)^3)/2] v + (1 - v)/2.
inline KeyRateReport dw_rate_werner(Accuracy p, double v) {
  const auto att = local_weight_werner(p, v);
  const double agree = (1.0 + p.parity_bias(3)) / 2.0 * v + (1.0 - v) / 2.0;
  return detail::assemble(att, binary_entropy(agree), p.value(), 3, v);
}

}  // namespace diqkd
