// mcsim.hpp
// Round-level Monte Carlo of the protocol. Each round: every party picks a
// setting, an outcome string is sampled from the exact state, each bit is
// flipped with probability 1 - p, and the round is sifted into an SI test
// round, a raw-key round, or discarded.
//
// Party 1 chooses from {-pi/4, pi/4, 0, pi/2}; every other party from
// {0, pi/2}. Test rounds: party 1 at +-pi/4. Key rounds: all angles in
// {0, pi/2} with an even number of pi/2 entries.
//
// Round r draws its randomness from counter_stream(seed, r), so the result
// does not depend on how rounds are split across workers.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/noise.hpp"
#include "diqkd/qstate.hpp"
#include "diqkd/random.hpp"
#include "diqkd/svetlichny.hpp"

namespace diqkd {

struct GhzSource {};
struct WernerSource {
  double v = 1.0;
};
using Source = std::variant<GhzSource, WernerSource>;

inline constexpr int kMaxSimParties = 12;

struct SimConfig {
  int n = 3;
  std::uint64_t rounds = 1'000'000;
  double p = 1.0;
  Source source = GhzSource{};
  std::uint64_t seed = 1;
  /// Relative weights of party 1's angles {-pi/4, pi/4, 0, pi/2}.
  std::array<double, 4> party1_weights{1.0, 1.0, 1.0, 1.0};
  /// Relative weights of the other parties' angles {0, pi/2}.
  std::array<double, 2> other_weights{1.0, 1.0};
  unsigned workers = 1;
  bool retain_raw_keys = false;

  /// Visibility of the source (1 for GHZ).
  double visibility() const {
    if (const auto* w = std::get_if<WernerSource>(&source)) return w->v;
    return 1.0;
  }

  void validate() const {
    if (n < 3 || n > kMaxSimParties) throw dimension_error("simulation supports 3 <= n <= 12");
    if (rounds < 1) throw domain_error("rounds must be positive");
    static_cast<void>(Accuracy{p});
    if (std::holds_alternative<WernerSource>(source)) {
      if (n != 3) throw dimension_error("Werner source is defined for n = 3 only");
      const double v = visibility();
      if (!(v >= 0.0 && v <= 1.0)) throw domain_error("visibility must lie in [0, 1]");
    }
    auto check = [](auto const& w) {
      double s = 0.0;
      for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw domain_error("setting weights must be finite and >= 0");
        s += x;
      }
      if (!(s > 0.0)) throw domain_error("setting weights must not all be zero");
    };
    check(party1_weights);
    check(other_weights);
    if (party1_weights[0] + party1_weights[1] <= 0.0) throw domain_error("party 1 never runs a test round");
  }
};

/// One retained raw-key round.
struct KeyRecord {
  std::uint64_t round;
  std::uint32_t setting_mask;  // bit i set: party i measured at pi/2
  std::uint32_t outcomes;      // bit i: party i's (noisy) outcome

  friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

struct SimStats {
  int n = 3;
  // Indexed by test setting vector x (bit i = choice of party i).
  std::vector<std::uint64_t> test_success;  // parity condition met (M1)
  std::vector<std::uint64_t> test_failure;  // not met (M2)
  // Indexed by key setting mask (bit i = party i at pi/2).
  std::vector<std::uint64_t> key_consistent;
  std::vector<std::uint64_t> key_inconsistent;
  // Indexed by party-1 choice + 4 * (other parties' pi/2 mask).
  std::vector<std::uint64_t> setting_histogram;
  std::uint64_t total_test_rounds = 0;
  std::uint64_t total_key_rounds = 0;
  std::uint64_t discarded_rounds = 0;
  std::vector<KeyRecord> raw_keys;

  explicit SimStats(int parties = 3)
      : n(parties),
        test_success(std::size_t{1} << parties),
        test_failure(std::size_t{1} << parties),
        key_consistent(std::size_t{1} << parties),
        key_inconsistent(std::size_t{1} << parties),
        setting_histogram(std::size_t{4} << (parties - 1)) {}

  std::uint64_t total_rounds() const { return total_test_rounds + total_key_rounds + discarded_rounds; }

  /// Appends `other` (which must cover later rounds when raw keys are kept).
  SimStats& operator+=(const SimStats& other) {
    auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(test_success, other.test_success);
    add(test_failure, other.test_failure);
    add(key_consistent, other.key_consistent);
    add(key_inconsistent, other.key_inconsistent);
    add(setting_histogram, other.setting_histogram);
    total_test_rounds += other.total_test_rounds;
    total_key_rounds += other.total_key_rounds;
    discarded_rounds += other.discarded_rounds;
    raw_keys.insert(raw_keys.end(), other.raw_keys.begin(), other.raw_keys.end());
    return *this;
  }

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

enum class RoundKind { test, key, discard };

/// Per-setting data precomputed once per run.
struct SettingPlan {
  RoundKind kind = RoundKind::discard;
  std::uint32_t index = 0;   // test setting vector or key setting mask
  int target_parity = 0;     // outcome XOR expected on success / consistency
  std::vector<double> cdf;   // over 2^n outcome strings
};

namespace detail {

inline constexpr std::array<double, 4> kParty1Angles{-std::numbers::pi / 4, std::numbers::pi / 4, 0.0,
                                                     std::numbers::pi / 2};

inline std::vector<double> outcome_cdf(const OutcomeDistribution& dist) {
  std::vector<double> cdf(dist.probs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    const double pr = dist.probs[i] < 1e-15 ? 0.0 : dist.probs[i];
    total += pr;
    cdf[i] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

template <std::size_t K>
std::array<double, K> normalized_cdf(const std::array<double, K>& w) {
  std::array<double, K> c{};
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double run = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    run += w[i];
    c[i] = run / total;
  }
  return c;
}

template <std::size_t K>
std::size_t pick(const std::array<double, K>& cdf, double u) {
  for (std::size_t i = 0; i + 1 < K; ++i)
    if (u < cdf[i]) return i;
  return K - 1;
}

}  // namespace detail

/// GHZ_n eigenvalue parity bit (0: +1, 1: -1) of the sigma_x/sigma_y tensor
/// selected by `pi2_mask`, read off the dense state.
inline int ghz_key_parity(int n, std::uint32_t pi2_mask) {
  std::vector<MeasurementSetting> s;
  for (int i = 0; i < n; ++i) s.emplace_back(((pi2_mask >> i) & 1U) ? std::numbers::pi / 2 : 0.0);
  return correlator(ghz_state(n), s) < 0.0 ? 1 : 0;
}

/// Classification and outcome distribution for every full setting id.
inline std::vector<SettingPlan> build_plan(const SimConfig& cfg) {
  const int n = cfg.n;
  const std::size_t others = std::size_t{1} << (n - 1);
  std::vector<SettingPlan> plan(4 * others);
  std::optional<StateVector> pure;
  std::optional<DensityMatrix> mixed;
  if (std::holds_alternative<WernerSource>(cfg.source))
    mixed = werner_state(cfg.visibility());
  else
    pure = ghz_state(n);

  std::vector<MeasurementSetting> settings(static_cast<std::size_t>(n));
  for (std::size_t om = 0; om < others; ++om) {
    const auto other_mask = static_cast<std::uint32_t>(om << 1);  // party i >= 1 at bit i
    for (int c = 0; c < 4; ++c) {
      SettingPlan& sp = plan[static_cast<std::size_t>(c) + 4 * om];
      settings[0] = MeasurementSetting(detail::kParty1Angles[static_cast<std::size_t>(c)]);
      for (int i = 1; i < n; ++i) settings[static_cast<std::size_t>(i)] =
          MeasurementSetting(((other_mask >> i) & 1U) ? std::numbers::pi / 2 : 0.0);
      sp.cdf = detail::outcome_cdf(pure ? joint_outcome_probs(*pure, settings)
                                        : joint_outcome_probs(*mixed, settings));
      if (c < 2) {
        sp.kind = RoundKind::test;
        sp.index = other_mask | static_cast<std::uint32_t>(c);
        sp.target_parity = svetlichny_parity(sp.index);
      } else {
        const std::uint32_t mask = other_mask | static_cast<std::uint32_t>(c - 2);
        if (std::popcount(mask) % 2 == 0) {
          sp.kind = RoundKind::key;
          sp.index = mask;
          sp.target_parity = ghz_key_parity(n, mask);
        }
      }
    }
  }
  return plan;
}

namespace detail {

inline SimStats run_rounds(const SimConfig& cfg, const std::vector<SettingPlan>& plan, std::uint64_t begin,
                           std::uint64_t end) {
  SimStats st(cfg.n);
  const Accuracy acc(cfg.p);
  const auto p1_cdf = normalized_cdf(cfg.party1_weights);
  const auto other_cdf = normalized_cdf(cfg.other_weights);
  for (std::uint64_t r = begin; r < end; ++r) {
    auto rng = counter_stream(cfg.seed, r);
    const std::size_t choice = pick(p1_cdf, uniform01(rng));
    std::size_t other_mask = 0;
    for (int i = 1; i < cfg.n; ++i)
      if (pick(other_cdf, uniform01(rng)) == 1) other_mask |= std::size_t{1} << (i - 1);
    const std::size_t id = choice + 4 * other_mask;
    const SettingPlan& sp = plan[id];
    ++st.setting_histogram[id];

    const double u = uniform01(rng);
    const auto it = std::upper_bound(sp.cdf.begin(), sp.cdf.end(), u);
    auto ideal = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - sp.cdf.begin(),
                                                                      static_cast<std::ptrdiff_t>(sp.cdf.size()) - 1));
    const std::uint64_t outcomes = flip_outcome_mask(ideal, cfg.n, acc, rng);
    const int parity = std::popcount(outcomes) & 1;

    switch (sp.kind) {
      case RoundKind::test:
        ++st.total_test_rounds;
        ++(parity == sp.target_parity ? st.test_success : st.test_failure)[sp.index];
        break;
      case RoundKind::key:
        ++st.total_key_rounds;
        // Party 1's bit equals the others' parity XOR the eigenvalue bit
        // exactly when the full parity matches the eigenvalue bit.
        ++(parity == sp.target_parity ? st.key_consistent : st.key_inconsistent)[sp.index];
        if (cfg.retain_raw_keys) st.raw_keys.push_back({r, sp.index, static_cast<std::uint32_t>(outcomes)});
        break;
      case RoundKind::discard:
        ++st.discarded_rounds;
        break;
    }
  }
  return st;
}

}  // namespace detail

inline SimStats run_protocol(const SimConfig& cfg) {
  cfg.validate();
  const auto plan = build_plan(cfg);
  const unsigned workers = std::max(1U, cfg.workers);
  const std::uint64_t chunk = (cfg.rounds + workers - 1) / workers;
  std::vector<SimStats> parts(workers, SimStats(cfg.n));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(cfg.rounds, w * chunk);
      const std::uint64_t end = std::min(cfg.rounds, begin + chunk);
      pool.emplace_back([&, w, begin, end] { parts[w] = detail::run_rounds(cfg, plan, begin, end); });
    }
  }
  SimStats total(cfg.n);
  for (const auto& part : parts) total += part;
  return total;
}

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// (estimate - target) / std_error; 0 when a zero-variance estimate hits the
/// target exactly, infinity when it misses.
inline double z_score(const Estimate& e, double target) {
  const double diff = e.value - target;
  if (e.std_error > 0.0) return diff / e.std_error;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace detail {

inline Estimate binomial(std::uint64_t hits, std::uint64_t total) {
  const double f = static_cast<double>(hits) / static_cast<double>(total);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(total))};
}

}  // namespace detail

/// Uniform average of per-vector success frequencies over the 2^n test
/// setting vectors; binomial standard errors combined in quadrature.
inline Estimate estimate_si(const SimStats& stats) {
  const std::size_t vectors = stats.test_success.size();
  double sum = 0.0;
  double var = 0.0;
  for (std::size_t x = 0; x < vectors; ++x) {
    const std::uint64_t total = stats.test_success[x] + stats.test_failure[x];
    if (total == 0) throw insufficient_data("test setting vector " + std::to_string(x) + " never observed");
    const auto e = detail::binomial(stats.test_success[x], total);
    sum += e.value;
    var += e.std_error * e.std_error;
  }
  const double k = static_cast<double>(vectors);
  return {sum / k, std::sqrt(var) / k};
}

struct KeySettingEstimate {
  std::uint32_t setting_mask;
  std::uint64_t rounds;
  Estimate consistency;
};

struct KeyConsistency {
  std::vector<KeySettingEstimate> per_setting;  // observed key settings, ascending mask
  Estimate pooled;
};

inline KeyConsistency estimate_key_consistency(const SimStats& stats) {
  if (stats.total_key_rounds == 0) throw insufficient_data("no key rounds");
  KeyConsistency out;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (std::size_t m = 0; m < stats.key_consistent.size(); ++m) {
    const std::uint64_t t = stats.key_consistent[m] + stats.key_inconsistent[m];
    if (t == 0) continue;
    out.per_setting.push_back({static_cast<std::uint32_t>(m), t, detail::binomial(stats.key_consistent[m], t)});
    hits += stats.key_consistent[m];
    total += t;
  }
  out.pooled = detail::binomial(hits, total);
  return out;
}

/// Analytic targets for a configuration.
struct SimPrediction {
  double si_expected;         // probability-form SI value
  double key_consistency;  // P(party 1 = parity of the rest, eigenvalue-corrected)
};

inline SimPrediction predict(const SimConfig& cfg) {
  const Accuracy acc(cfg.p);
  const double v = cfg.visibility();
  const double ideal = v * kQuantumProbBound + (1.0 - v) * 0.5;
  return {degrade_success_prob(ideal, acc, cfg.n), (1.0 + v * acc.parity_bias(cfg.n)) / 2.0};
}

struct SimReport {
  SimConfig config;
  SimStats stats;
  Estimate si;
  KeyConsistency key;
  SimPrediction prediction;
  double si_z = 0.0;
  double key_z = 0.0;
  std::vector<double> key_setting_z;  // aligned with key.per_setting
};

inline SimReport simulate(const SimConfig& cfg) {
  SimReport rep{cfg, run_protocol(cfg), {}, {}, predict(cfg), 0.0, 0.0, {}};
  rep.si = estimate_si(rep.stats);
  rep.key = estimate_key_consistency(rep.stats);
  rep.si_z = z_score(rep.si, rep.prediction.si_expected);
  rep.key_z = z_score(rep.key.pooled, rep.prediction.key_consistency);
  for (const auto& k : rep.key.per_setting)
    rep.key_setting_z.push_back(z_score(k.consistency, rep.prediction.key_consistency));
  return rep;
}

}  // namespace diqkd
