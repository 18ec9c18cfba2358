// svetlichny.hpp
// Svetlichny expression in correlator form (three parties) and probability
// form (any n), the generalized measurement protocol, and an exhaustive
// deterministic-strategy bound used as a classical-bound oracle.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/qstate.hpp"

namespace diqkd {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
/// Probability-form classical bound.
inline constexpr double kClassicalProbBound = 0.75;
/// Probability-form quantum bound 1/2 + sqrt2/4.
inline constexpr double kQuantumProbBound = 0.5 + kSqrt2 / 4.0;
inline constexpr double kClassicalCorrBound = 4.0;
inline constexpr double kQuantumCorrBound = 4.0 * kSqrt2;

/// Setting vector x_1..x_n packed as bits (bit i = choice of party i).
using SettingVector = std::uint32_t;

/// Target parity sum_{i<j} x_i x_j mod 2 of a setting vector.
/// With m = popcount(x) this is C(m, 2) mod 2.
inline int svetlichny_parity(SettingVector x) {
  const auto m = static_cast<unsigned>(std::popcount(x));
  return static_cast<int>((m * (m - 1) / 2) & 1U);
}

/// P(sum a_i = sum_{i<j} x_i x_j | x) for each of the 2^n setting vectors.
class CorrelationModel {
 public:
  explicit CorrelationModel(int n) : n_(n), entries_(std::size_t{1} << n) {
    if (n < 2 || n > 20) throw dimension_error("party count out of range for a correlation model");
  }

  /// Every entry set to the same probability.
  static CorrelationModel isotropic(int n, double success) {
    CorrelationModel m(n);
    for (SettingVector x = 0; x < m.size(); ++x) m.set(x, success);
    return m;
  }

  int parties() const { return n_; }
  SettingVector size() const { return static_cast<SettingVector>(entries_.size()); }

  void set(SettingVector x, double success) {
    if (x >= size()) throw dimension_error("setting vector out of range");
    if (!(success >= 0.0 && success <= 1.0)) throw domain_error("success probability outside [0, 1]");
    entries_[x] = success;
  }

  std::optional<double> get(SettingVector x) const { return x < size() ? entries_[x] : std::nullopt; }

  bool complete() const {
    return std::ranges::all_of(entries_, [](const auto& e) { return e.has_value(); });
  }

  /// All entries present and equal within 1e-12.
  bool isotropic_flag() const {
    if (!complete()) return false;
    const double first = *entries_.front();
    return std::ranges::all_of(entries_, [first](const auto& e) { return std::abs(*e - first) <= 1e-12; });
  }

 private:
  int n_;
  std::vector<std::optional<double>> entries_;
};

enum class SvetlichnyForm { correlator, probability };

struct SvetlichnyValue {
  double value = 0.0;
  SvetlichnyForm form = SvetlichnyForm::probability;
  double classical_bound = kClassicalProbBound;
  double quantum_bound = kQuantumProbBound;

  bool violates() const {
    return form == SvetlichnyForm::probability ? value > classical_bound
                                               : std::abs(value) > classical_bound;
  }
};

/// Affine map between the two forms: value_prob = 1/2 + value_corr / 2^{n+1}.
inline double correlator_to_probability_form(double corr_value, int n) {
  return 0.5 + corr_value / std::ldexp(1.0, n + 1);
}

inline SvetlichnyValue si_probability_value(const CorrelationModel& model) {
  double sum = 0.0;
  for (SettingVector x = 0; x < model.size(); ++x) {
    const auto e = model.get(x);
    if (!e) throw incomplete_model_error("correlation model lacks setting vector " + std::to_string(x));
    sum += *e;
  }
  return {sum / model.size(), SvetlichnyForm::probability, kClassicalProbBound, kQuantumProbBound};
}

/// Three-party correlator table keyed by (x, y, z).
using CorrelatorTable = std::map<std::array<int, 3>, double>;

/// Signed sum of the eight three-party correlators: + for (000),(001),(010),(100),
/// - for the rest.
inline SvetlichnyValue si_correlator_value(const CorrelatorTable& correlators) {
  double sum = 0.0;
  for (SettingVector x = 0; x < 8; ++x) {
    const std::array<int, 3> key{static_cast<int>(x & 1U), static_cast<int>((x >> 1) & 1U),
                                 static_cast<int>((x >> 2) & 1U)};
    const auto it = correlators.find(key);
    if (it == correlators.end()) {
      throw incomplete_model_error("missing correlator <A" + std::to_string(key[0]) + "B" +
                                   std::to_string(key[1]) + "C" + std::to_string(key[2]) + ">");
    }
    sum += svetlichny_parity(x) ? -it->second : it->second;
  }
  return {sum, SvetlichnyForm::correlator, kClassicalCorrBound, kQuantumCorrBound};
}

/// Two measurement angles per party, indexed by the choice bit.
using SettingPair = std::pair<double, double>;

/// Party 1 uses {-pi/4, pi/4}, every other party {0, pi/2}. Reaches the
/// quantum bound on GHZ_n for every n.
inline std::vector<SettingPair> protocol_angles(int n) {
  if (n < 2) throw dimension_error("protocol needs at least two parties");
  constexpr double q = std::numbers::pi / 4.0;
  std::vector<SettingPair> out(static_cast<std::size_t>(n), SettingPair{0.0, 2.0 * q});
  out.front() = {-q, q};
  return out;
}

template <class State>
CorrelationModel probability_form_from_settings(const State& state,
                                                std::span<const SettingPair> per_party) {
  const int n = state.parties();
  if (static_cast<int>(per_party.size()) != n) {
    throw dimension_error("need exactly one setting pair per party");
  }
  CorrelationModel model(n);
  std::vector<MeasurementSetting> settings(static_cast<std::size_t>(n));
  for (SettingVector x = 0; x < model.size(); ++x) {
    for (int i = 0; i < n; ++i) {
      const auto& pair = per_party[static_cast<std::size_t>(i)];
      settings[static_cast<std::size_t>(i)] = MeasurementSetting(((x >> i) & 1U) ? pair.second : pair.first);
    }
    const auto dist = joint_outcome_probs(state, settings);
    model.set(x, std::clamp(dist.parity_probability(svetlichny_parity(x)), 0.0, 1.0));
  }
  return model;
}

/// Correlator table for three parties under the given per-party setting pairs.
template <class State>
CorrelatorTable correlators_from_settings(const State& state, std::span<const SettingPair> per_party) {
  if (state.parties() != 3 || per_party.size() != 3) {
    throw dimension_error("correlator form is defined for three parties");
  }
  CorrelatorTable table;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        const std::array<MeasurementSetting, 3> s{
            MeasurementSetting(x ? per_party[0].second : per_party[0].first),
            MeasurementSetting(y ? per_party[1].second : per_party[1].first),
            MeasurementSetting(z ? per_party[2].second : per_party[2].first)};
        table[{x, y, z}] = correlator(state, s);
      }
  return table;
}

inline constexpr int kDeterministicEnumerationCap = 10;

/// Maximum of sum_x (-1)^{s(x)} prod_i A^{(i)}_{x_i} over all +-1 assignments
/// of the 2n observables. The last party's two signs are optimized in closed
/// form: for fixed others the sum is A0*S0 + A1*S1, maximized by |S0| + |S1|.
inline double deterministic_bound(int n, int cap = kDeterministicEnumerationCap) {
  if (n < 2) throw dimension_error("deterministic bound needs at least two parties");
  if (n > cap) {
    throw enumeration_cap_error("deterministic enumeration capped at n = " + std::to_string(cap));
  }
  const int rest = n - 1;
  const std::uint64_t assignments = std::uint64_t{1} << (2 * rest);
  const SettingVector rest_settings = SettingVector{1} << rest;
  long best = 0;
  for (std::uint64_t a = 0; a < assignments; ++a) {
    long s0 = 0;
    long s1 = 0;
    for (SettingVector x = 0; x < rest_settings; ++x) {
      int sign = 1;
      for (int i = 0; i < rest; ++i) {
        const int bit = static_cast<int>((x >> i) & 1U);
        if ((a >> (2 * i + bit)) & 1U) sign = -sign;
      }
      const SettingVector x0 = x;
      const SettingVector x1 = x | (SettingVector{1} << rest);
      s0 += svetlichny_parity(x0) ? -sign : sign;
      s1 += svetlichny_parity(x1) ? -sign : sign;
    }
    best = std::max(best, std::labs(s0) + std::labs(s1));
  }
  return static_cast<double>(best);
}

}  // namespace diqkd
