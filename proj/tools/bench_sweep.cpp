// bench_sweep — wall-time comparison of the serial and OpenMP-parallel paths
// of the randomized inequality battery.
//
//   bench_sweep [trials] [repeats] [seed]

#include "qsm/sweep.hpp"
#include "qsm/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

double run_once(const qsm::VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = qsm::verify_suite(opt);
    const auto t1 = std::chrono::steady_clock::now();
    for (const auto& r : results) {
        if (!r.passed) {
            std::fprintf(stderr, "unexpected failure in %s (worst margin %.3e)\n", r.name.c_str(),
                         r.worst_margin);
            std::exit(1);
        }
    }
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    qsm::VerifyOptions opt;
    opt.trials = (argc > 1) ? std::atol(argv[1]) : 60;
    const int repeats = (argc > 2) ? std::atoi(argv[2]) : 3;
    opt.seed = (argc > 3) ? std::strtoull(argv[3], nullptr, 10) : 1;

    std::printf("inequality battery, %ld trials per check, best of %d runs\n", opt.trials, repeats);
    std::printf("OpenMP %s, %d workers\n\n", qsm::openmp_enabled() ? "enabled" : "disabled",
                qsm::worker_count());

    double best_serial = 1e300, best_parallel = 1e300;
    for (int r = 0; r < repeats; ++r) {
        opt.parallel = false;
        const double ts = run_once(opt);
        opt.parallel = true;
        const double tp = run_once(opt);
        std::printf("  run %d: serial %8.3f s   parallel %8.3f s\n", r + 1, ts, tp);
        if (ts < best_serial) best_serial = ts;
        if (tp < best_parallel) best_parallel = tp;
    }
    std::printf("\nbest serial:   %8.3f s\nbest parallel: %8.3f s\nspeedup:       %8.2fx\n",
                best_serial, best_parallel, best_serial / best_parallel);
    return 0;
}
