#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hcsck {

using cplx = std::complex<double>;

// Upper-bound margin for all spectral-radius domain checks: delta < 1 means
// delta < 1 - kDomainMargin, since the square root degenerates at delta = 1.
inline constexpr double kDomainMargin = 1e-12;

// Solvers keep a wider safety margin away from the degenerate locus.
inline constexpr double kAdmissibilityMargin = 1e-6;

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Hessian of a symplectic potential failed to be positive-definite somewhere.
struct degenerate_potential_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral radius of xi*G*conj(xi)*G too close to 1.
struct inadmissible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic uniform generator, independent of libstdc++ distribution
// internals so that seeded outputs are stable across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift* (Marsaglia); period 2^64 - 1
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    cplx uniform_complex(double radius) {
        return {uniform(-radius, radius), uniform(-radius, radius)};
    }

  private:
    std::uint64_t state_;
};

std::string fmt_g17(double x);

} // namespace hcsck
