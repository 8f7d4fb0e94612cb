#pragma once

#include <cstddef>
#include <exception>

namespace hcsck {

// Node-wise sweeps run either serially (reference path, kept for testing) or
// under OpenMP.  Both paths compute each node independently, so results are
// bitwise identical regardless of thread count.
enum class Exec { serial, parallel };

// Library-wide default used by module-level entry points.
Exec default_exec();
void set_default_exec(Exec e);

// Apply HCSCK_THREADS (if set) as a cap on OpenMP workers.
void apply_thread_cap_from_env();

template <class F>
void parallel_for(std::size_t n, Exec exec, F&& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    // exceptions may not escape the structured block; capture the first one
    std::exception_ptr err;
#pragma omp parallel for schedule(static) shared(err)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(hcsck_parallel_for_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
    parallel_for(n, default_exec(), static_cast<F&&>(body));
}

} // namespace hcsck
