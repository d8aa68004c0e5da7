// sweep.hpp — batches of independent trials, serial or OpenMP-parallel.
// Results land in per-trial slots and are reduced sequentially, so the
// aggregate is identical for any thread count.
#pragma once

#include <exception>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsm {

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// fn(i) -> T for i in [0, n). Exceptions are captured per slot and the first
// (by index) is rethrown after the loop, parallel or not.
template <class T, class Fn>
std::vector<T> map_indexed(long n, Fn&& fn, bool parallel = true) {
    std::vector<T> results(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) {
            try {
                results[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else
#endif
    {
        (void)parallel;
        for (long i = 0; i < n; ++i) {
            try {
                results[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }

    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return results;
}

} // namespace qsm
