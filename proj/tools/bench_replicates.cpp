// Compares the OpenMP replicate engine against the serial reference and
// checks that both produce identical results.

#include "fairaudit/simulate.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fairaudit;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double>(elapsed).count();
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t replicates = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
    std::uint64_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;

    SimConfig cfg;
    cfg.population.rates_g1 = GroupRates::from_parameters(0.5, 0.79, 0.85);
    cfg.population.rates_g2 = GroupRates::from_parameters(0.4, 0.68, 0.80);
    cfg.metric = MetricKind::TPR;
    cfg.n1 = n;
    cfg.n2 = n;
    cfg.replicates = replicates;
    cfg.master_seed = 20240615;
    cfg.alpha = Probability(0.05);
    cfg.u_tol = 0.0;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled in this build\n");
#endif
    std::printf("replicates=%llu  n per group=%llu\n",
                static_cast<unsigned long long>(replicates),
                static_cast<unsigned long long>(n));

    auto t0 = std::chrono::steady_clock::now();
    const SimResult serial = run_replicates_serial(cfg);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SimResult parallel = run_replicates(cfg);
    const double parallel_s = seconds_since(t0);

    std::printf("serial:   %8.3f s   rejection_rate=%.6f\n", serial_s,
                serial.rejection_rate);
    std::printf("parallel: %8.3f s   rejection_rate=%.6f\n", parallel_s,
                parallel.rejection_rate);
    std::printf("speedup:  %8.2fx\n", serial_s / parallel_s);

    if (!(serial == parallel)) {
        std::printf("MISMATCH: serial and parallel results differ\n");
        return 1;
    }
    std::printf("results identical\n");
    return 0;
}
