// Times the OpenMP trial runner against the serial reference on a fixed
// workload and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctm/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_results(const std::vector<ctm::TrialResult>& a,
                  const std::vector<ctm::TrialResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].tau != b[i].tau) return false;
        if (a[i].wealth_path != b[i].wealth_path) return false;
        if (a[i].pvalue_path != b[i].pvalue_path) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t trials = 64;
    std::uint64_t horizon = 2000;
    if (argc > 1) trials = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) horizon = std::strtoull(argv[2], nullptr, 10);

    const auto scenario = ctm::Scenario::immediate(1.0, horizon);
    ctm::DetectorConfig cfg;  // conditional, alpha 0.05, delta 0.1, clip 0.1
    ctm::TrialOptions opts;
    opts.n_ref = 1000;
    opts.record_paths = true;
    opts.compute_regret = false;

    std::printf("workload: %zu trials, horizon %llu, n_ref %llu, variant %s\n", trials,
                static_cast<unsigned long long>(horizon),
                static_cast<unsigned long long>(opts.n_ref), ctm::variant_name(cfg.variant));

    auto t0 = Clock::now();
    const auto serial = ctm::run_trials_serial(scenario, cfg, opts, 1, trials);
    const double serial_s = seconds_since(t0);
    std::printf("serial   : %8.3f s  (%.1f trials/s)\n", serial_s,
                static_cast<double>(trials) / serial_s);

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    for (int threads = 1; threads <= max_threads; threads *= 2) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
        t0 = Clock::now();
        const auto parallel = ctm::run_trials(scenario, cfg, opts, 1, trials);
        const double par_s = seconds_since(t0);
        const bool ok = same_results(serial, parallel);
        std::printf("omp x%-3d : %8.3f s  (%.1f trials/s)  speedup %.2fx  results %s\n",
                    threads, par_s, static_cast<double>(trials) / par_s, serial_s / par_s,
                    ok ? "identical" : "MISMATCH");
        if (!ok) return 1;
    }
    return 0;
}
