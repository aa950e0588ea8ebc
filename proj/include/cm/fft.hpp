#pragma once
// Radix-2 complex FFT plus the circle-function helpers built on it:
// conjugate function (circular Hilbert transform), Fourier coefficients,
// spectral derivative and trigonometric upsampling.

#include <cassert>
#include <vector>

#include "cm/core.hpp"

namespace cm {

/// In-place iterative radix-2 FFT. sign = -1 forward, +1 inverse (unscaled).
inline void fft_radix2(std::vector<Cpx>& a, int sign) {
    const std::size_t n = a.size();
    assert(is_pow2(n));
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const Cpx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Cpx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Cpx u = a[i + k];
                Cpx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::vector<Cpx> fft(std::vector<Cpx> a) {
    fft_radix2(a, -1);
    return a;
}

inline std::vector<Cpx> ifft(std::vector<Cpx> a) {
    fft_radix2(a, +1);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& z : a) z *= inv;
    return a;
}

/// Signed frequency of bin k for an n-point transform: 0,1,...,n/2,-(n/2-1),...,-1.
inline long fft_freq(std::size_t k, std::size_t n) {
    return k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

/// Conjugate function on the circle: cos(k t) -> sin(k t), constants -> 0.
/// Input: samples of u at t_j = 2*pi*j/n, n a power of two.
inline std::vector<double> conjugate_function(const std::vector<double>& u) {
    const std::size_t n = u.size();
    std::vector<Cpx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = u[j];
    fft_radix2(a, -1);
    for (std::size_t k = 0; k < n; ++k) {
        long f = fft_freq(k, n);
        if (f > 0)
            a[k] *= Cpx(0, -1);
        else if (f < 0)
            a[k] *= Cpx(0, 1);
        else
            a[k] = 0;
    }
    fft_radix2(a, +1);
    std::vector<double> v(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = a[j].real() * inv;
    return v;
}

/// Derivative of a smooth periodic sample set, computed spectrally.
inline std::vector<double> spectral_derivative(const std::vector<double>& u) {
    const std::size_t n = u.size();
    std::vector<Cpx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = u[j];
    fft_radix2(a, -1);
    for (std::size_t k = 0; k < n; ++k) {
        long f = fft_freq(k, n);
        if (k == n / 2) f = 0;  // drop the unmatched Nyquist mode
        a[k] *= Cpx(0, static_cast<double>(f));
    }
    fft_radix2(a, +1);
    std::vector<double> d(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = a[j].real() * inv;
    return d;
}

/// Analytic-part Fourier coefficients c_0..c_{n/2-1} of complex boundary
/// samples b_j = g(e^{i t_j}) for g holomorphic in the disk.
inline std::vector<Cpx> analytic_coefficients(const std::vector<Cpx>& b) {
    const std::size_t n = b.size();
    std::vector<Cpx> a = b;
    fft_radix2(a, -1);
    std::vector<Cpx> c(n / 2);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) c[k] = a[k] * inv;
    return c;
}

/// Trigonometric upsampling of real periodic samples to m >= n points.
inline std::vector<double> trig_upsample(const std::vector<double>& u, std::size_t m) {
    const std::size_t n = u.size();
    assert(is_pow2(n) && is_pow2(m) && m >= n);
    if (m == n) return u;
    std::vector<Cpx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = u[j];
    fft_radix2(a, -1);
    std::vector<Cpx> b(m, Cpx(0));
    for (std::size_t k = 0; k < n / 2; ++k) b[k] = a[k];
    for (std::size_t k = n / 2 + 1; k < n; ++k) b[m - n + k] = a[k];
    b[n / 2] = 0.5 * a[n / 2];
    b[m - n / 2] = 0.5 * a[n / 2];
    fft_radix2(b, +1);
    std::vector<double> out(m);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) out[j] = b[j].real() * inv;
    return out;
}

}  // namespace cm
