#pragma once
// Shared scalar types, tolerances and small numeric helpers.

#include <complex>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cm {

using Cpx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Relative tolerance used for on-boundary detection (times curve diameter).
inline constexpr double kOnBoundaryRel = 1e-12;

/// Relative tie tolerance for open-disk membership: atoms within this relative
/// distance of the circle |z - c| = r count as inside.
inline constexpr double kDiskTieRel = 1e-14;

inline double sqr(double x) { return x * x; }
inline double norm2(Cpx z) { return z.real() * z.real() + z.imag() * z.imag(); }

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    return t < 0 ? t + kTwoPi : t;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Thrown when a Newton iteration fails to converge; carries the iterate trace.
class NewtonError : public std::runtime_error {
public:
    NewtonError(const std::string& what, std::vector<Cpx> trace)
        : std::runtime_error(what), iterates(std::move(trace)) {}
    std::vector<Cpx> iterates;
};

/// Deterministic chunked parallel map over [0, n). Each worker owns a
/// contiguous index block, so per-index results never depend on thread count.
/// Reductions on top of this must be order-independent (max/min) or merged
/// block-by-block in index order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn,
                         unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2048) {
        block_fn(0, n);
        return;
    }
    std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back(block_fn, lo, hi);
    }
    for (auto& t : pool) t.join();
}

/// Seeded RNG used by the harness suites; fixed engine for reproducibility.
using Rng = std::mt19937_64;

inline Cpx random_in_disk(Rng& rng, double rmax) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = rmax * std::sqrt(u(rng));
    double t = kTwoPi * u(rng);
    return Cpx(r * std::cos(t), r * std::sin(t));
}

}  // namespace cm
