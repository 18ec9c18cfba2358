// Command-line front end. Each subcommand builds an OutputRecord that is
// serialized as CSV or JSON.
//
// Exit codes: 0 success, 1 argument or domain error, 2 numerical failure.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diqkd/diqkd.hpp"
#include "output_record.hpp"

namespace diqkd::cli {

inline constexpr const char* kToolName = "diqkd";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSeedEnv = "DIQKD_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
  return g;
}

inline OutputRecord cmd_thresholds(int n_min, int n_max, int n_cap = 10) {
  if (n_min < 3 || n_max < n_min || n_max > n_cap) {
    throw usage_error("need 3 <= --n-min <= --n-max <= " + std::to_string(n_cap));
  }
  OutputRecord rec;
  rec.schema = "thresholds";
  rec.columns = {"n", "p_cr", "p_th"};
  for (const auto& r : thresholds_table(n_min, n_max)) rec.add_row({static_cast<long long>(r.n), r.p_cr, r.p_th});
  rec.meta["parameters"] = {{"n_min", n_min}, {"n_max", n_max}};
  return rec;
}

inline OutputRecord cmd_keyrate_curve(int n, double p_start, double p_end, int steps) {
  if (n < 3) throw usage_error("--n must be at least 3");
  if (!(p_start >= 0.5 && p_start < p_end && p_end <= 1.0)) throw usage_error("need 1/2 <= --p-start < --p-end <= 1");
  if (steps < 2) throw usage_error("--steps must be at least 2");
  OutputRecord rec;
  rec.schema = "keyrate_curve";
  rec.columns = {"p", "q_L_raw", "q_L", "H_A_given_E", "H_A_given_rest", "r_dw", "abort_flag"};
  for (double p : linspace(p_start, p_end, steps)) {
    const auto r = dw_rate(Accuracy(p), n);
    rec.add_row({p, r.attack.q_l_raw, r.attack.q_l, r.h_a_given_e, r.h_a_given_rest, r.r_dw, r.abort});
  }
  rec.meta["parameters"] = {{"n", n}, {"p_start", p_start}, {"p_end", p_end}, {"steps", steps}};
  return rec;
}

inline OutputRecord cmd_werner_grid(int v_steps, int p_steps, double p_start = 0.5) {
  if (v_steps < 2 || p_steps < 2) throw usage_error("grid sizes must be at least 2");
  if (!(p_start >= 0.5 && p_start < 1.0)) throw usage_error("need 1/2 <= --p-start < 1");
  const auto vs = linspace(0.0, 1.0, v_steps);
  const auto ps = linspace(p_start, 1.0, p_steps);

  OutputRecord grid;
  grid.schema = "werner_grid";
  grid.columns = {"v", "p", "r_dw"};
  for (double v : vs)
    for (double p : ps) grid.add_row({v, p, dw_rate_werner(Accuracy(p), v).r_dw});

  OutputRecord boundary;
  boundary.schema = "werner_boundary";
  boundary.columns = {"p", "v_threshold"};
  std::vector<double> interior;
  for (double p : ps)
    if (p > 0.5) interior.push_back(p);
  const auto pts = werner_boundary(interior);
  std::size_t k = 0;
  for (double p : ps) {
    if (p <= 0.5) {
      boundary.add_row({p, std::monostate{}});
      continue;
    }
    const auto& pt = pts[k++];
    boundary.add_row({p, pt.v_threshold ? Cell{*pt.v_threshold} : Cell{std::monostate{}}});
  }

  grid.meta["parameters"] = {{"v_steps", v_steps}, {"p_steps", p_steps}, {"p_start", p_start}};
  boundary.meta = grid.meta;
  grid.companions.emplace_back("boundary", std::move(boundary));
  return grid;
}

inline std::string mask_string(std::uint32_t mask, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += ((mask >> i) & 1U) ? '1' : '0';
  return s;
}

inline OutputRecord cmd_simulate(const SimConfig& cfg) {
  const SimReport rep = simulate(cfg);
  OutputRecord rec;
  rec.schema = "simulation";
  rec.columns = {"quantity", "setting", "estimate", "std_error", "predicted", "z_score"};
  rec.add_row({std::string("si_value"), std::string("all"), rep.si.value, rep.si.std_error, rep.prediction.si_expected,
               rep.si_z});
  rec.add_row({std::string("key_consistency"), std::string("pooled"), rep.key.pooled.value, rep.key.pooled.std_error,
               rep.prediction.key_consistency, rep.key_z});
  for (std::size_t i = 0; i < rep.key.per_setting.size(); ++i) {
    const auto& k = rep.key.per_setting[i];
    rec.add_row({std::string("key_consistency"), mask_string(k.setting_mask, cfg.n), k.consistency.value,
                 k.consistency.std_error, rep.prediction.key_consistency, rep.key_setting_z[i]});
  }

  const bool werner = std::holds_alternative<WernerSource>(cfg.source);
  rec.meta["parameters"] = {{"n", cfg.n},
                            {"p", cfg.p},
                            {"rounds", cfg.rounds},
                            {"source", werner ? "werner" : "ghz"},
                            {"v", cfg.visibility()},
                            {"workers", cfg.workers},
                            {"party1_weights", cfg.party1_weights},
                            {"other_weights", cfg.other_weights}};
  rec.extra["counts"] = {{"test_rounds", rep.stats.total_test_rounds},
                         {"key_rounds", rep.stats.total_key_rounds},
                         {"discarded_rounds", rep.stats.discarded_rounds},
                         {"test_success", rep.stats.test_success},
                         {"test_failure", rep.stats.test_failure}};
  return rec;
}

inline OutputRecord cmd_detector(const DetectorParams& d, int n) {
  if (n < 3) throw usage_error("--n must be at least 3");
  const double p = accuracy_from_detector(d).value();
  const double p_cr = critical_accuracy(n);
  const double p_th = threshold_accuracy(n);
  const bool violates = p > p_cr;
  const bool positive = p > p_th;
  OutputRecord rec;
  rec.schema = "detector";
  rec.columns = {"q1", "q2", "policy", "p", "n", "p_cr", "p_th", "violates_si", "positive_key"};
  rec.add_row({d.q1, d.q2, std::string(to_string(d.policy)), p, static_cast<long long>(n), p_cr, p_th, violates,
               positive});
  const std::string at = " at n=" + std::to_string(n);
  rec.meta["parameters"] = {{"q1", d.q1}, {"q2", d.q2}, {"policy", to_string(d.policy)}, {"n", n}};
  rec.extra["verdicts"] = {violates ? "violates SI" + at : "no SI violation" + at,
                           positive ? "positive key" + at : "no positive key" + at};
  return rec;
}

/// Entry point shared by the binary and the tests. `env_seed` is the value of
/// DIQKD_SEED (or null); an explicit --seed wins.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const char* env_seed = std::getenv(kSeedEnv)) {
  CLI::App app{"Security analysis of multi-party DIQKD under imperfect measurement accuracy", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string format = "csv";
  std::string output;
  bool no_timestamp = false;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output, "Write to this file instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from JSON metadata");
  app.add_option("--seed", seed_flag, "Random seed (overrides $" + std::string(kSeedEnv) + ")");
  app.fallthrough();

  int n_min = 3, n_max = 10, n_cap = 10;
  auto* th = app.add_subcommand("thresholds", "Critical and threshold accuracies per party count");
  th->add_option("--n-min", n_min);
  th->add_option("--n-max", n_max);
  th->add_option("--n-cap", n_cap, "Largest n accepted");

  int curve_n = 3, steps = 101;
  double p_start = 0.5, p_end = 1.0;
  auto* kc = app.add_subcommand("keyrate-curve", "Key rate and its ingredients along an accuracy grid");
  kc->add_option("--n", curve_n);
  kc->add_option("--p-start", p_start);
  kc->add_option("--p-end", p_end);
  kc->add_option("--steps", steps);

  int v_steps = 51, p_steps = 51;
  double grid_p_start = 0.5;
  std::string table = "grid";
  auto* wg = app.add_subcommand("werner-grid", "Werner-state key rate over the visibility-accuracy plane");
  wg->add_option("--v-steps", v_steps);
  wg->add_option("--p-steps", p_steps);
  wg->add_option("--p-start", grid_p_start);
  wg->add_option("--table", table, "Table written in CSV mode")->check(CLI::IsMember({"grid", "boundary"}));

  SimConfig sim;
  std::string source = "ghz";
  double visibility = 1.0;
  auto* sm = app.add_subcommand("simulate", "Round-level Monte Carlo of the protocol");
  sm->add_option("--n", sim.n);
  sm->add_option("--p", sim.p);
  sm->add_option("--rounds", sim.rounds);
  sm->add_option("--source", source)->check(CLI::IsMember({"ghz", "werner"}));
  sm->add_option("--v", visibility);
  sm->add_option("--workers", sim.workers);
  sm->add_option("--party1-weights", sim.party1_weights, "Weights of party 1's angles -pi/4 pi/4 0 pi/2");
  sm->add_option("--other-weights", sim.other_weights, "Weights of the other parties' angles 0 pi/2");

  DetectorParams det;
  std::string policy = "bind-undetected";
  int det_n = 3;
  auto* dt = app.add_subcommand("detector", "Accuracy implied by detector parameters");
  dt->add_option("--q1", det.q1)->required();
  dt->add_option("--q2", det.q2)->required();
  dt->add_option("--policy", policy)->check(CLI::IsMember({"fair-sampling", "bind-undetected"}));
  dt->add_option("--n", det_n);

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kToolVersion) + "\n" : app.help());
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  std::uint64_t seed = kDefaultSeed;
  try {
    if (seed_flag) {
      seed = *seed_flag;
    } else if (env_seed && *env_seed) {
      seed = std::stoull(env_seed);
    }
  } catch (const std::exception&) {
    err << "error: " << kSeedEnv << " is not an unsigned integer\n";
    return 1;
  }

  OutputRecord rec;
  try {
    if (th->parsed()) {
      rec = cmd_thresholds(n_min, n_max, n_cap);
    } else if (kc->parsed()) {
      rec = cmd_keyrate_curve(curve_n, p_start, p_end, steps);
    } else if (wg->parsed()) {
      rec = cmd_werner_grid(v_steps, p_steps, grid_p_start);
    } else if (sm->parsed()) {
      if (source == "werner") sim.source = WernerSource{visibility};
      sim.seed = seed;
      rec = cmd_simulate(sim);
    } else {
      det.policy = policy == "fair-sampling" ? DetectionPolicy::fair_sampling : DetectionPolicy::bind_undetected;
      rec = cmd_detector(det, det_n);
    }
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return 1;
  } catch (const numerical_failure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const insufficient_data& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  Json meta = {{"tool", kToolName}, {"version", kToolVersion}, {"command", app.get_subcommands().front()->get_name()},
               {"seed", seed}};
  if (!no_timestamp) meta["timestamp"] = utc_timestamp();
  for (const auto& [k, v] : rec.meta.items()) meta[k] = v;
  rec.meta = meta;
  for (auto& [name, companion] : rec.companions) companion.meta = meta;

  std::string text;
  if (format == "json") {
    text = to_json(rec);
  } else if (table == "boundary" && !rec.companions.empty()) {
    text = to_csv(rec.companions.front().second);
  } else {
    text = to_csv(rec);
  }

  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << output << "\n";
      return 1;
    }
    f << text;
  }
  return 0;
}

}  // namespace diqkd::cli
