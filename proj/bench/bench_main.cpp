// Wall-clock of the serial reference loops against the OpenMP kernels.
#include <chrono>
#include <cstdio>
#include <functional>

#include "heis/brownian.hpp"
#include "heis/girsanov.hpp"
#include "heis/wong_zakai.hpp"

using namespace heis;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, const std::function<void(Exec)>& kernel) {
  const double s = seconds([&] { kernel(Exec::serial); });
  const double p = seconds([&] { kernel(Exec::openmp); });
  std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %5.2fx\n", name, s, p, s / p);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", max_threads());
  report("ws-converge 2^-12 x 500", [](Exec e) {
    WsConvergenceConfig c;
    c.trials = 500;
    c.exec = e;
    ws_convergence_experiment(c);
  });
  report("levy-law 2^-12 x 20000", [](Exec e) {
    LevyLawConfig c;
    c.trials = 20000;
    c.exec = e;
    levy_law_experiment(c);
  });
  const ReferenceCurve phi = ReferenceCurve::line({1, 0});
  report("tube probability 2^-10 x 1e5", [&](Exec e) { tube_probability(phi, 0.7, 100000, {10, 1, 0, e}); });
  report("martingale mean 2^-10 x 2e4", [&](Exec e) { martingale_mean(phi, 20000, {10, 1, 0, e}); });
  return 0;
}
