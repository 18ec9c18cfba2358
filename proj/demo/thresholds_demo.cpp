// Prints the accuracy thresholds and a short Monte Carlo check for n = 3.

#include <cstdio>

#include "diqkd/diqkd.hpp"

int main() {
  using namespace diqkd;
  std::printf("%3s  %-10s %-10s\n", "n", "p_cr", "p_th");
  for (const auto& r : thresholds_table(3, 10)) std::printf("%3d  %.8f %.8f\n", r.n, r.p_cr, r.p_th);

  const auto rate = dw_rate(Accuracy(0.97), 3);
  std::printf("\nn=3, p=0.97: q_L=%.6f  r_dw=%.6f\n", rate.attack.q_l, rate.r_dw);

  SimConfig cfg;
  cfg.n = 3;
  cfg.p = 0.97;
  cfg.rounds = 200'000;
  const auto rep = simulate(cfg);
  std::printf("simulated SI %.5f +- %.5f (predicted %.5f)\n", rep.si.value, rep.si.std_error, rep.prediction.si_expected);
  std::printf("key consistency %.5f +- %.5f (predicted %.5f)\n", rep.key.pooled.value, rep.key.pooled.std_error,
              rep.prediction.key_consistency);
}
