// attack.hpp
// Local weight of the convex combination attack. Eve reproduces the observed
// probability-form SI value with a mixture of the maximal Svetlichny-local
// correlation (3/4, fully known to her) and the GHZ correlation
// (1/2 + sqrt2/4, unknown to her):
//
//   3/4 q_L + (1/2 + sqrt2/4)(1 - q_L) = observed value.

#pragma once

#include <algorithm>
#include <string>
#include <variant>

#include "diqkd/errors.hpp"
#include "diqkd/noise.hpp"
#include "diqkd/svetlichny.hpp"

namespace diqkd {

namespace scenario {
struct ThreeParty {};
struct NParty {
  int n;
};
struct Werner {
  double v;
};
}  // namespace scenario

using Scenario = std::variant<scenario::ThreeParty, scenario::NParty, scenario::Werner>;

inline int party_count(const Scenario& s) {
  if (const auto* np = std::get_if<scenario::NParty>(&s)) return np->n;
  return 3;
}

inline std::string describe(const Scenario& s) {
  struct {
    std::string operator()(scenario::ThreeParty) const { return "three-party"; }
    std::string operator()(scenario::NParty np) const { return "n-party(" + std::to_string(np.n) + ")"; }
    std::string operator()(scenario::Werner w) const { return "werner(" + std::to_string(w.v) + ")"; }
  } visitor;
  return std::visit(visitor, s);
}

struct AttackDecomposition {
  double q_l_raw = 0.0;  // closed form; exceeds 1 when the observation is SI-local
  double q_l = 0.0;      // clamped to [0, 1]
  double local_value = kClassicalProbBound;
  double nonlocal_value = kQuantumProbBound;
  Scenario scenario = scenario::ThreeParty{};

  /// Legitimate users abort when the observed correlation does not violate the SI.
  bool aborts() const { return q_l_raw > 1.0; }

  /// Probability-form value reproduced by the (clamped) mixture.
  double mixture_value() const { return q_l * local_value + (1.0 - q_l) * nonlocal_value; }
};

namespace detail {

inline void require_violation_regime(Accuracy p) {
  if (p.value() < 0.5) throw domain_error("accuracy below 1/2 is outside the attack model");
}

inline void require_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw domain_error("visibility must lie in [0, 1]");
}

inline AttackDecomposition make_decomposition(double raw, Scenario s) {
  return {raw, std::clamp(raw, 0.0, 1.0), kClassicalProbBound, kQuantumProbBound, s};
}

}  // namespace detail

/// q_L = 2 sqrt2 (1 - 3p + 6p^2 - 4p^3) / (sqrt2 - 1).
inline AttackDecomposition local_weight_3party(Accuracy p) {
  detail::require_violation_regime(p);
  const double x = p.value();
  const double poly = 1.0 - 3.0 * x + 6.0 * x * x - 4.0 * x * x * x;
  return detail::make_decomposition(2.0 * kSqrt2 * poly / (kSqrt2 - 1.0), scenario::ThreeParty{});
}

/// q_L = sqrt2 [1 - (2p-1)^n] / (sqrt2 - 1).
inline AttackDecomposition local_weight_nparty(Accuracy p, int n) {
  detail::require_violation_regime(p);
  if (n < 3) throw dimension_error("n-party attack needs n >= 3");
  const double raw = kSqrt2 * (1.0 - p.parity_bias(n)) / (kSqrt2 - 1.0);
  return detail::make_decomposition(raw, scenario::NParty{n});
}

/// q_L = (2 + sqrt2) [1 - (2p-1)^3 v] for the three-qubit Werner state.
inline AttackDecomposition local_weight_werner(Accuracy p, double v) {
  detail::require_violation_regime(p);
  detail::require_visibility(v);
  const double raw = (2.0 + kSqrt2) * (1.0 - p.parity_bias(3) * v);
  return detail::make_decomposition(raw, scenario::Werner{v});
}

}  // namespace diqkd
