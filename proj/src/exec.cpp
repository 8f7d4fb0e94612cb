#include "hcsck/exec.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hcsck {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};
}

Exec default_exec() { return g_exec.load(std::memory_order_relaxed); }
void set_default_exec(Exec e) { g_exec.store(e, std::memory_order_relaxed); }

void apply_thread_cap_from_env() {
#ifdef _OPENMP
    if (const char* cap = std::getenv("HCSCK_THREADS")) {
        const long n = std::strtol(cap, nullptr, 10);
        if (n > 0 && n < omp_get_max_threads()) omp_set_num_threads(static_cast<int>(n));
    }
#endif
}

} // namespace hcsck
