// noise.hpp
// Measurement accuracy: detector parameters to accuracy p, the analytic
// parity-degradation map, and the per-party flip channel used by the
// simulator.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/random.hpp"
#include "diqkd/svetlichny.hpp"

namespace diqkd {

/// Probability that one party's instrument reports the ideal outcome.
class Accuracy {
 public:
  explicit Accuracy(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("accuracy must lie in [0, 1]");
  }
  double value() const { return p_; }

  /// Parity bias (2p - 1)^n seen by an n-party parity.
  double parity_bias(int n) const { return std::pow(2.0 * p_ - 1.0, n); }

 private:
  double p_;
};

enum class DetectionPolicy { fair_sampling, bind_undetected };

inline std::string_view to_string(DetectionPolicy p) {
  return p == DetectionPolicy::fair_sampling ? "fair-sampling" : "bind-undetected";
}

struct DetectorParams {
  double q1 = 1.0;  // accurate-state-reflection rate
  double q2 = 1.0;  // detection efficiency
  DetectionPolicy policy = DetectionPolicy::bind_undetected;
};

/// fair-sampling: p = q1. bind-undetected: p = q1 q2 + (1 - q2)/2, assuming
/// the outcome assigned to undetected events is unbiased.
inline Accuracy accuracy_from_detector(const DetectorParams& d) {
  if (!(d.q1 >= 0.0 && d.q1 <= 1.0)) throw domain_error("q1 must lie in [0, 1]");
  if (!(d.q2 >= 0.0 && d.q2 <= 1.0)) throw domain_error("q2 must lie in [0, 1]");
  if (d.policy == DetectionPolicy::fair_sampling) return Accuracy(d.q1);
  return Accuracy(d.q1 * d.q2 + (1.0 - d.q2) / 2.0);
}

/// Success probability after independent per-party errors at accuracy p:
/// (2p-1)^n P' + (1 - (2p-1)^n)/2.
inline double degrade_success_prob(double p_perfect, Accuracy p, int n) {
  if (!(p_perfect >= 0.0 && p_perfect <= 1.0)) throw domain_error("success probability outside [0, 1]");
  if (n < 1) throw dimension_error("party count must be positive");
  const double bias = p.parity_bias(n);
  return bias * p_perfect + (1.0 - bias) / 2.0;
}

/// Probability-form SI value when the ideal correlation sits at the quantum bound.
inline double degraded_si_value(Accuracy p, int n) { return degrade_success_prob(kQuantumProbBound, p, n); }

/// Flips each set bit position [0, n) of `outcomes` independently with
/// probability 1 - p. Consumes exactly n uniforms from `rng`.
template <class Rng>
std::uint64_t flip_outcome_mask(std::uint64_t outcomes, int n, Accuracy p, Rng& rng) {
  for (int i = 0; i < n; ++i)
    if (uniform01(rng) >= p.value()) outcomes ^= std::uint64_t{1} << i;
  return outcomes;
}

/// Bit-vector form of the flip channel.
template <class Rng>
std::vector<std::uint8_t> flip_channel(std::span<const std::uint8_t> outcomes, Accuracy p, Rng& rng) {
  std::vector<std::uint8_t> out(outcomes.begin(), outcomes.end());
  for (auto& b : out)
    if (uniform01(rng) >= p.value()) b ^= 1U;
  return out;
}

}  // namespace diqkd
