#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "diqkd/svetlichny.hpp"
#include "oracles.hpp"

using namespace diqkd;
using std::numbers::pi;

namespace {

// Straight enumeration of all 2^{2n} sign assignments and all 2^n terms.
long brute_force_deterministic(int n) {
  long best = -1000000;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << (2 * n)); ++a) {
    long s = 0;
    for (std::uint32_t x = 0; x < (1U << n); ++x) {
      int m = 0;
      int prod = 1;
      for (int i = 0; i < n; ++i) {
        const int xi = static_cast<int>((x >> i) & 1U);
        m += xi;
        if ((a >> (2 * i + xi)) & 1U) prod = -prod;
      }
      const int sign = ((m * (m - 1) / 2) % 2) ? -1 : 1;
      s += sign * prod;
    }
    best = std::max(best, s);
  }
  return best;
}

StateVector random_product_state(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> psi{1.0};
  for (int i = 0; i < n; ++i) {
    const double theta = std::acos(1.0 - 2.0 * u(rng));
    const double phi = 2.0 * pi * u(rng);
    const cplx a = std::cos(theta / 2);
    const cplx b = std::polar(std::sin(theta / 2), phi);
    std::vector<cplx> next(psi.size() * 2);
    for (std::size_t k = 0; k < psi.size(); ++k) {
      next[k] = psi[k] * a;                // qubit i = 0
      next[k + psi.size()] = psi[k] * b;   // qubit i = 1 (bit i)
    }
    psi = std::move(next);
  }
  double norm = 0.0;
  for (auto& c : psi) norm += std::norm(c);
  for (auto& c : psi) c /= std::sqrt(norm);
  return StateVector(n, psi);
}

StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> psi(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& c : psi) {
    c = {g(rng), g(rng)};
    norm += std::norm(c);
  }
  for (auto& c : psi) c /= std::sqrt(norm);
  return StateVector(n, psi);
}

std::vector<SettingPair> random_pairs(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-pi, pi);
  std::vector<SettingPair> out;
  for (int i = 0; i < n; ++i) out.emplace_back(ang(rng), ang(rng));
  return out;
}

}  // namespace

TEST(SiProbabilityValue, UniformRandomness) {
  const auto v = si_probability_value(CorrelationModel::isotropic(3, 0.5));
  EXPECT_DOUBLE_EQ(v.value, 0.5);
  EXPECT_FALSE(v.violates());
  EXPECT_EQ(v.form, SvetlichnyForm::probability);
  EXPECT_DOUBLE_EQ(v.classical_bound, 0.75);
}

TEST(SiProbabilityValue, QuantumBoundEntries) {
  const auto v = si_probability_value(CorrelationModel::isotropic(3, 0.5 + std::sqrt(2.0) / 4));
  EXPECT_NEAR(v.value, 0.853553390593, 1e-12);
  EXPECT_NEAR(v.value, v.quantum_bound, 1e-15);
  EXPECT_TRUE(v.violates());
}

TEST(SiProbabilityValue, GhzProtocolViaStateOracle) {
  const auto pairs = protocol_angles(3);
  const auto v = si_probability_value(probability_form_from_settings(ghz_state(3), pairs));
  EXPECT_NEAR(v.value, 0.8535533905932737, 1e-10);
}

TEST(SiProbabilityValue, IncompleteModel) {
  CorrelationModel m(3);
  for (SettingVector x = 0; x < 7; ++x) m.set(x, 0.5);
  EXPECT_FALSE(m.complete());
  EXPECT_FALSE(m.isotropic_flag());
  EXPECT_THROW(si_probability_value(m), incomplete_model_error);
}

TEST(CorrelationModel, RejectsOutOfRangeEntries) {
  CorrelationModel m(3);
  EXPECT_THROW(m.set(8, 0.5), dimension_error);
  EXPECT_THROW(m.set(0, 1.5), domain_error);
}

TEST(SiCorrelatorValue, AllPlusOneCancels) {
  CorrelatorTable t;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) t[{x, y, z}] = 1.0;
  const auto v = si_correlator_value(t);
  EXPECT_DOUBLE_EQ(v.value, 0.0);
  EXPECT_FALSE(v.violates());
}

TEST(SiCorrelatorValue, GhzProtocolReachesFourRootTwo) {
  const auto pairs = protocol_angles(3);
  ASSERT_DOUBLE_EQ(pairs[0].first, -pi / 4);
  ASSERT_DOUBLE_EQ(pairs[0].second, pi / 4);
  ASSERT_DOUBLE_EQ(pairs[1].second, pi / 2);
  const auto v = si_correlator_value(correlators_from_settings(ghz_state(3), pairs));
  EXPECT_NEAR(v.value, 4.0 * std::sqrt(2.0), 1e-10);
  EXPECT_TRUE(v.violates());
  EXPECT_DOUBLE_EQ(v.classical_bound, 4.0);
}

TEST(SiCorrelatorValue, MissingTerm) {
  CorrelatorTable t;
  t[{0, 0, 0}] = 1.0;
  EXPECT_THROW(si_correlator_value(t), incomplete_model_error);
}

TEST(SiCorrelatorValue, DeterministicAllPlusWithinClassicalBound) {
  // A0=A1=B0=B1=C0=C1=+1: every correlator is +1.
  CorrelatorTable t;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) t[{x, y, z}] = 1.0;
  EXPECT_LE(std::abs(si_correlator_value(t).value), deterministic_bound(3));
}

TEST(ProbabilityForm, GhzThreePartyIsIsotropicAtQuantumBound) {
  const auto m = probability_form_from_settings(ghz_state(3), protocol_angles(3));
  EXPECT_TRUE(m.isotropic_flag());
  for (SettingVector x = 0; x < 8; ++x) EXPECT_NEAR(*m.get(x), kQuantumProbBound, 1e-10);
}

TEST(ProbabilityForm, WernerEntriesInterpolate) {
  for (double v : {0.0, 0.3, 0.9, 1.0}) {
    const auto m = probability_form_from_settings(werner_state(v), protocol_angles(3));
    for (SettingVector x = 0; x < 8; ++x)
      EXPECT_NEAR(*m.get(x), v * kQuantumProbBound + (1.0 - v) / 2.0, 1e-12) << v;
  }
}

TEST(ProbabilityForm, GeneralizedProtocolReachesQuantumBound) {
  for (int n = 3; n <= 6; ++n) {
    const auto m = probability_form_from_settings(ghz_state(n), protocol_angles(n));
    EXPECT_TRUE(m.isotropic_flag()) << n;
    for (SettingVector x = 0; x < m.size(); ++x) EXPECT_NEAR(*m.get(x), kQuantumProbBound, 1e-10) << n;
    EXPECT_NEAR(si_probability_value(m).value, kQuantumProbBound, 1e-10);
  }
}

TEST(ProbabilityForm, GeneralizedProtocolAgreesWithDenseOracle) {
  // Per setting vector, success probability from explicit projectors.
  for (int n = 4; n <= 5; ++n) {
    const auto pairs = protocol_angles(n);
    const auto psi = oracle::ghz(n);
    for (std::uint32_t x = 0; x < (1U << n); ++x) {
      std::vector<double> angles;
      for (int i = 0; i < n; ++i) angles.push_back(((x >> i) & 1U) ? pairs[i].second : pairs[i].first);
      const auto probs = oracle::outcome_probs(psi, angles);
      double success = 0.0;
      for (std::size_t o = 0; o < probs.size(); ++o)
        if (static_cast<int>(std::popcount(o) & 1U) == svetlichny_parity(x)) success += probs[o];
      EXPECT_NEAR(success, kQuantumProbBound, 1e-10);
    }
  }
}

TEST(ProbabilityForm, WrongPairCount) {
  EXPECT_THROW(probability_form_from_settings(ghz_state(3), protocol_angles(4)), dimension_error);
}

TEST(DeterministicBound, KnownValues) {
  EXPECT_DOUBLE_EQ(deterministic_bound(2), 2.0);
  EXPECT_DOUBLE_EQ(deterministic_bound(3), 4.0);
  // Enumerated: 4 at n=4, 8 at n=5, both 0.625 in probability form.
  EXPECT_DOUBLE_EQ(deterministic_bound(4), 4.0);
  EXPECT_DOUBLE_EQ(deterministic_bound(5), 8.0);
  EXPECT_LE(correlator_to_probability_form(deterministic_bound(4), 4), kClassicalProbBound);
  EXPECT_DOUBLE_EQ(correlator_to_probability_form(deterministic_bound(3), 3), kClassicalProbBound);
}

TEST(DeterministicBound, MatchesBruteForce) {
  for (int n = 2; n <= 5; ++n) EXPECT_DOUBLE_EQ(deterministic_bound(n), brute_force_deterministic(n)) << n;
}

TEST(DeterministicBound, EnumerationCap) {
  EXPECT_THROW(deterministic_bound(11), enumeration_cap_error);
  EXPECT_THROW(deterministic_bound(6, 5), enumeration_cap_error);
}

TEST(SvetlichnyProperty, AffineConsistencyBetweenForms) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    const auto psi = random_state(3, rng);
    const auto pairs = random_pairs(3, rng);
    const auto corr = si_correlator_value(correlators_from_settings(psi, pairs));
    const auto prob = si_probability_value(probability_form_from_settings(psi, pairs));
    EXPECT_NEAR(correlator_to_probability_form(corr.value, 3), prob.value, 1e-12);
    EXPECT_EQ(corr.value > 4.0, prob.violates());
  }
}

TEST(SvetlichnyProperty, ProductStatesNeverExceedDeterministicBound) {
  std::mt19937_64 rng(5);
  for (int n = 3; n <= 5; ++n) {
    const double bound = correlator_to_probability_form(deterministic_bound(n), n);
    for (int t = 0; t < 40; ++t) {
      const auto psi = random_product_state(n, rng);
      const auto v = si_probability_value(probability_form_from_settings(psi, random_pairs(n, rng)));
      EXPECT_LE(v.value, bound + 1e-12);
    }
  }
}
