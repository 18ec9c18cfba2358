// thresholds.hpp
// Critical accuracy for SI violation, threshold accuracy for a positive key
// rate, and the Werner-plane zero-rate boundary.

#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/keyrate.hpp"
#include "diqkd/noise.hpp"
#include "diqkd/svetlichny.hpp"

namespace diqkd {

struct BisectionOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
};

/// Final bracket of a sign-change bisection. `negative` and `positive` are
/// the endpoints where f < 0 and f >= 0 respectively.
struct BisectionResult {
  double negative;
  double positive;
  int iterations;

  double width() const { return std::abs(positive - negative); }
  double midpoint() const { return 0.5 * (negative + positive); }
};

/// Bisection on a bracket [lo, hi] where f changes sign. Works for either
/// orientation of the sign change.
template <class F>
BisectionResult bisect(F&& f, double lo, double hi, const BisectionOptions& opt = {}) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw numerical_failure("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double neg = flo < 0.0 ? lo : hi;
  double pos = flo < 0.0 ? hi : lo;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double mid = 0.5 * (neg + pos);
    if (f(mid) < 0.0)
      neg = mid;
    else
      pos = mid;
    if (std::abs(pos - neg) <= opt.tolerance) return {neg, pos, it};
  }
  throw numerical_failure("bisection did not converge within " + std::to_string(opt.max_iterations) +
                          " iterations");
}

/// (2p-1)^n at which the key rate vanishes: sqrt2 / (2 sqrt2 - 1).
inline constexpr double kZeroRateParityBias = kSqrt2 / (2.0 * kSqrt2 - 1.0);

/// Closed form p_cr = (1 + 2^{-1/(2n)})/2, the root of degraded_si_value(p, n) = 3/4.
inline double critical_accuracy(int n) {
  if (n < 3) throw dimension_error("thresholds are defined for n >= 3");
  return 0.5 * (1.0 + std::pow(2.0, -1.0 / (2.0 * n)));
}

/// Same root located by bisection on degraded_si_value(p, n) - 3/4.
inline BisectionResult critical_accuracy_bisection(int n, const BisectionOptions& opt = {}) {
  if (n < 3) throw dimension_error("thresholds are defined for n >= 3");
  return bisect([n](double p) { return degraded_si_value(Accuracy(p), n) - kClassicalProbBound; }, 0.5, 1.0,
                opt);
}

/// Reduction r_DW = 0  <=>  q_L_raw = (2p-1)^n  <=>  (2p-1)^n = sqrt2/(2 sqrt2 - 1).
inline double threshold_accuracy_closed_form(int n) {
  if (n < 3) throw dimension_error("thresholds are defined for n >= 3");
  return 0.5 * (1.0 + std::pow(kZeroRateParityBias, 1.0 / n));
}

/// Smallest p with r_DW(p, n) >= 0, by bisection on (p_cr, 1). The returned
/// bracket's `positive` end is the reported threshold.
inline BisectionResult threshold_accuracy_bisection(int n, const BisectionOptions& opt = {}) {
  const double lo = critical_accuracy(n) + 1e-12;
  const double hi = 1.0 - 1e-12;
  return bisect([n](double p) { return dw_rate(Accuracy(p), n).r_dw; }, lo, hi, opt);
}

inline double threshold_accuracy(int n, const BisectionOptions& opt = {}) {
  return threshold_accuracy_bisection(n, opt).positive;
}

enum class Method { closed_form, bisection };

inline std::string_view to_string(Method m) { return m == Method::closed_form ? "closed-form" : "bisection"; }

struct ThresholdReport {
  int n = 3;
  double p_cr = 0.0;
  double p_th = 0.0;
  Method p_cr_method = Method::closed_form;
  Method p_th_method = Method::bisection;
  double tolerance = 0.0;  // achieved bracket width for p_th
  int iterations = 0;
  double p_th_closed_form = 0.0;  // cross-check
};

inline ThresholdReport threshold_report(int n, const BisectionOptions& opt = {}) {
  const auto b = threshold_accuracy_bisection(n, opt);
  ThresholdReport r;
  r.n = n;
  r.p_cr = critical_accuracy(n);
  r.p_th = b.positive;
  r.tolerance = b.width();
  r.iterations = b.iterations;
  r.p_th_closed_form = threshold_accuracy_closed_form(n);
  return r;
}

/// One report per n in [n_min, n_max]; rows are computed concurrently and
/// returned in ascending n.
inline std::vector<ThresholdReport> thresholds_table(int n_min, int n_max, const BisectionOptions& opt = {}) {
  if (n_min < 3 || n_max < n_min) throw domain_error("need 3 <= n_min <= n_max");
  std::vector<std::future<ThresholdReport>> rows;
  for (int n = n_min; n <= n_max; ++n)
    rows.push_back(std::async(std::launch::async, [n, opt] { return threshold_report(n, opt); }));
  std::vector<ThresholdReport> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(r.get());
  return out;
}

struct WernerBoundaryPoint {
  double p;
  std::optional<double> v_threshold;  // empty: no v <= 1 gives a positive rate
};

/// For each p, the visibility where dw_rate_werner(p, v).r_dw crosses zero.
inline std::vector<WernerBoundaryPoint> werner_boundary(const std::vector<double>& p_grid,
                                                        const BisectionOptions& opt = {}) {
  std::vector<WernerBoundaryPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    if (!(p > 0.5 && p <= 1.0)) throw domain_error("boundary grid points must lie in (1/2, 1]");
    const Accuracy acc(p);
    auto rate = [acc](double v) { return dw_rate_werner(acc, v).r_dw; };
    const double at_full = rate(1.0);
    if (at_full < 0.0) {
      out.push_back({p, std::nullopt});
    } else if (at_full == 0.0) {
      out.push_back({p, 1.0});
    } else {
      out.push_back({p, bisect(rate, 0.0, 1.0, opt).positive});
    }
  }
  return out;
}

}  // namespace diqkd
