// qstate.hpp
// Dense n-qubit states (GHZ, three-qubit Werner) and equatorial spin
// measurements. Everything here is exact linear algebra on 2^n amplitudes and
// serves as the reference against which the closed-form modules are checked.
//
// Conventions:
//   * party i is qubit i and occupies bit i of a basis / outcome index;
//   * outcome bit 0 means eigenvalue +1, bit 1 means eigenvalue -1.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diqkd/errors.hpp"

namespace diqkd {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxParties = 12;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

/// Equatorial spin observable cos(angle) sigma_x + sin(angle) sigma_y.
class MeasurementSetting {
 public:
  constexpr MeasurementSetting() = default;
  explicit MeasurementSetting(double angle) : angle_(normalize(angle)) {}

  /// Azimuth in (-pi, pi].
  double angle() const { return angle_; }

  /// Normalized eigenvector for the given outcome bit:
  /// |+> = (1, e^{i angle})/sqrt2 for bit 0, |-> = (1, -e^{i angle})/sqrt2 for bit 1.
  std::array<cplx, 2> eigenvector(int outcome) const {
    const double s = outcome == 0 ? 1.0 : -1.0;
    const cplx phase = std::polar(1.0, angle_);
    return {cplx{kInvSqrt2, 0.0}, s * phase * kInvSqrt2};
  }

  static double normalize(double angle) {
    double a = std::remainder(angle, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
  }

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;

 private:
  double angle_ = 0.0;
};

namespace detail {

inline void check_parties(int n, int max_n) {
  if (n < 2 || n > max_n) {
    throw dimension_error("party count " + std::to_string(n) + " outside [2, " +
                          std::to_string(max_n) + "]");
  }
}

inline std::size_t dimension_of(int n) { return std::size_t{1} << n; }

using Mat2 = std::array<std::array<cplx, 2>, 2>;

// Rows are the conjugated eigenvectors: applying it maps amplitudes in the
// computational basis to amplitudes in the measurement eigenbasis.
inline Mat2 eigenbasis_change(const MeasurementSetting& s) {
  Mat2 u{};
  for (int row = 0; row < 2; ++row) {
    const auto ev = s.eigenvector(row);
    u[row][0] = std::conj(ev[0]);
    u[row][1] = std::conj(ev[1]);
  }
  return u;
}

// vec <- U_k vec, with U acting on qubit k of a vector with `stride` spacing.
inline void apply_local(std::span<cplx> data, std::size_t dim, int qubit, const Mat2& u,
                        std::size_t stride = 1) {
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    cplx& a = data[i * stride];
    cplx& b = data[(i | bit) * stride];
    const cplx na = u[0][0] * a + u[0][1] * b;
    const cplx nb = u[1][0] * a + u[1][1] * b;
    a = na;
    b = nb;
  }
}

}  // namespace detail

/// Pure n-qubit state.
class StateVector {
 public:
  /// Validates size 2^n and unit norm (within 1e-12); does not renormalize.
  StateVector(int n, std::vector<cplx> amplitudes, int max_n = kDefaultMaxParties)
      : n_(n), amps_(std::move(amplitudes)) {
    detail::check_parties(n, max_n);
    if (amps_.size() != detail::dimension_of(n)) {
      throw dimension_error("amplitude vector has " + std::to_string(amps_.size()) +
                            " entries, expected 2^" + std::to_string(n));
    }
    if (std::abs(squared_norm() - 1.0) > 1e-12) {
      throw domain_error("state vector is not normalized");
    }
  }

  int parties() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  int n_;
  std::vector<cplx> amps_;
};

/// Mixed n-qubit state, row-major 2^n x 2^n.
class DensityMatrix {
 public:
  /// Validates shape, Hermiticity and unit trace (within 1e-12).
  /// Positivity is not checked here; the factories below produce PSD matrices.
  DensityMatrix(int n, std::vector<cplx> entries, int max_n = kDefaultMaxParties)
      : n_(n), dim_(0), m_(std::move(entries)) {
    detail::check_parties(n, max_n);
    dim_ = detail::dimension_of(n);
    if (m_.size() != dim_ * dim_) throw dimension_error("density matrix has wrong size");
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = r; c < dim_; ++c) {
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > 1e-12) {
          throw domain_error("density matrix is not Hermitian");
        }
      }
    }
    if (std::abs(trace() - 1.0) > 1e-12) throw domain_error("density matrix trace is not 1");
  }

  static DensityMatrix projector(const StateVector& psi) {
    const std::size_t d = psi.dimension();
    const auto a = psi.amplitudes();
    std::vector<cplx> m(d * d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m[r * d + c] = a[r] * std::conj(a[c]);
    return DensityMatrix(psi.parties(), std::move(m));
  }

  int parties() const { return n_; }
  std::size_t dimension() const { return dim_; }
  std::span<const cplx> entries() const { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_[r * dim_ + c]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i).real();
    return t;
  }

  /// Tr(rho^2).
  double purity() const {
    double s = 0.0;
    for (const auto& e : m_) s += std::norm(e);  // Hermitian: sum |rho_ij|^2
    return s;
  }

 private:
  int n_;
  std::size_t dim_;
  std::vector<cplx> m_;
};

/// (|0...0> + |1...1>)/sqrt2 on n qubits.
inline StateVector ghz_state(int n, int max_n = kDefaultMaxParties) {
  detail::check_parties(n, max_n);
  std::vector<cplx> amps(detail::dimension_of(n));
  amps.front() = kInvSqrt2;
  amps.back() = kInvSqrt2;
  return StateVector(n, std::move(amps), max_n);
}

/// v |GHZ3><GHZ3| + (1 - v) I/8.
inline DensityMatrix werner_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw domain_error("visibility must lie in [0, 1]");
  const auto ghz = DensityMatrix::projector(ghz_state(3));
  constexpr std::size_t d = 8;
  std::vector<cplx> m(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      m[r * d + c] = v * ghz(r, c) + (r == c ? (1.0 - v) / 8.0 : 0.0);
  return DensityMatrix(3, std::move(m));
}

/// Joint distribution over outcome strings; index bit i is party i's outcome.
struct OutcomeDistribution {
  int parties = 0;
  std::vector<double> probs;

  double total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }

  /// Probability that the XOR of all outcome bits equals `parity`.
  double parity_probability(int parity) const {
    double s = 0.0;
    for (std::size_t o = 0; o < probs.size(); ++o)
      if (static_cast<int>(std::popcount(o) & 1U) == parity) s += probs[o];
    return s;
  }

  double marginal(int party, int outcome) const {
    double s = 0.0;
    for (std::size_t o = 0; o < probs.size(); ++o)
      if (static_cast<int>((o >> party) & 1U) == outcome) s += probs[o];
    return s;
  }
};

namespace detail {

inline void check_settings(int n, std::span<const MeasurementSetting> settings) {
  if (static_cast<int>(settings.size()) != n) {
    throw dimension_error("expected " + std::to_string(n) + " settings, got " +
                          std::to_string(settings.size()));
  }
}

}  // namespace detail

inline OutcomeDistribution joint_outcome_probs(const StateVector& state,
                                               std::span<const MeasurementSetting> settings) {
  const int n = state.parties();
  detail::check_settings(n, settings);
  const std::size_t d = state.dimension();
  std::vector<cplx> work(state.amplitudes().begin(), state.amplitudes().end());
  for (int k = 0; k < n; ++k)
    detail::apply_local(work, d, k, detail::eigenbasis_change(settings[k]));
  OutcomeDistribution out{n, std::vector<double>(d)};
  for (std::size_t o = 0; o < d; ++o) out.probs[o] = std::norm(work[o]);
  return out;
}

inline OutcomeDistribution joint_outcome_probs(const DensityMatrix& state,
                                               std::span<const MeasurementSetting> settings) {
  const int n = state.parties();
  detail::check_settings(n, settings);
  const std::size_t d = state.dimension();
  std::vector<cplx> work(state.entries().begin(), state.entries().end());
  for (int k = 0; k < n; ++k) {
    const auto u = detail::eigenbasis_change(settings[k]);
    // rho <- U rho: act on every column.
    for (std::size_t c = 0; c < d; ++c)
      detail::apply_local(std::span<cplx>(work).subspan(c), d, k, u, d);
    // rho <- rho U^dagger: act on every row with conj(U).
    detail::Mat2 uc{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) uc[i][j] = std::conj(u[i][j]);
    for (std::size_t r = 0; r < d; ++r)
      detail::apply_local(std::span<cplx>(work).subspan(r * d, d), d, k, uc);
  }
  OutcomeDistribution out{n, std::vector<double>(d)};
  for (std::size_t o = 0; o < d; ++o) out.probs[o] = std::max(0.0, work[o * d + o].real());
  return out;
}

/// Expectation of the tensor product of the equatorial observables.
template <class State>
double correlator(const State& state, std::span<const MeasurementSetting> settings) {
  const auto dist = joint_outcome_probs(state, settings);
  double e = 0.0;
  for (std::size_t o = 0; o < dist.probs.size(); ++o)
    e += (std::popcount(o) & 1U) ? -dist.probs[o] : dist.probs[o];
  return e;
}

/// Builds settings from raw angles.
inline std::vector<MeasurementSetting> settings_from_angles(std::span<const double> angles) {
  std::vector<MeasurementSetting> out;
  out.reserve(angles.size());
  for (double a : angles) out.emplace_back(a);
  return out;
}

}  // namespace diqkd
