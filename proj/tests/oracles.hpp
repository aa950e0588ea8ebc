#pragma once
// Test-side oracles, independent of the library code paths they check:
// closed-form lens areas, direct brute-force sweeps, quadrature winding
// numbers and stencil derivatives.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Cpx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// Area of D(z, r) intersected with the unit disk, |z| = 1 (circle-circle lens).
inline double lens_area(double r) {
    if (r <= 0) return 0;
    if (r >= 2) return pi;
    double c1 = std::clamp(r / 2, -1.0, 1.0);
    double c2 = std::clamp(1 - r * r / 2, -1.0, 1.0);
    return r * r * std::acos(c1) + std::acos(c2) - 0.5 * std::sqrt(r * r * (4 - r * r));
}

/// max_{0 < r <= 2} lens_area(r)/r by fine scan plus ternary refinement.
inline std::pair<double, double> lens_area_ratio_max() {
    double best = 0, bestr = 1;
    for (int k = 1; k <= 20000; ++k) {
        double r = 2.0 * k / 20000;
        double v = lens_area(r) / r;
        if (v > best) {
            best = v;
            bestr = r;
        }
    }
    double lo = bestr - 2e-4, hi = bestr + 2e-4;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (lens_area(m1) / m1 < lens_area(m2) / m2)
            lo = m1;
        else
            hi = m2;
    }
    double r = 0.5 * (lo + hi);
    return {lens_area(r) / r, r};
}

/// Brute-force chord-arc supremum of a closed polygon given by its vertices,
/// with arcs summed segment by segment (no prefix-sum shortcut).
inline double brute_force_chord_arc(const std::vector<Cpx>& v) {
    const std::size_t n = v.size();
    std::vector<double> seg(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        seg[i] = std::abs(v[(i + 1) % n] - v[i]);
        total += seg[i];
    }
    double best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double arc = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            arc += seg[j - 1];
            double chord = std::abs(v[j] - v[i]);
            if (chord < 1e-14) continue;
            best = std::max(best, std::min(arc, total - arc) / chord);
        }
    }
    return best;
}

/// Winding number of an analytic closed curve z(t), t in [0, 2 pi), about p,
/// by trapezoid quadrature of z'(t) / (z(t) - p).
inline double winding_quadrature(const std::function<Cpx(double)>& z,
                                 const std::function<Cpx(double)>& dz, Cpx p,
                                 std::size_t n = 1 << 15) {
    Cpx acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        double t = 2 * pi * j / n;
        acc += dz(t) / (z(t) - p);
    }
    acc *= 2 * pi / static_cast<double>(n) / Cpx(0, 2 * pi);
    return acc.real();
}

/// 5-point central stencil derivatives of a complex-analytic function.
inline Cpx stencil_d1(const std::function<Cpx(Cpx)>& f, Cpx z, double s) {
    return (-f(z + 2 * s) + 8.0 * f(z + s) - 8.0 * f(z - s) + f(z - 2 * s)) / (12 * s);
}
inline Cpx stencil_d2(const std::function<Cpx(Cpx)>& f, Cpx z, double s) {
    return (-f(z + 2 * s) + 16.0 * f(z + s) - 30.0 * f(z) + 16.0 * f(z - s) - f(z - 2 * s)) /
           (12 * s * s);
}
inline Cpx stencil_d3(const std::function<Cpx(Cpx)>& f, Cpx z, double s) {
    return (f(z + 2 * s) - 2.0 * f(z + s) + 2.0 * f(z - s) - f(z - 2 * s)) / (2 * s * s * s);
}

}  // namespace oracle
