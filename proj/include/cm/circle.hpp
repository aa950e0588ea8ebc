#pragma once
// Functions and homeomorphisms of the unit circle: uniform-grid samples,
// monotone degree-1 lifts, and the dyadic arc families used by the
// oscillation and weight diagnostics.

#include <algorithm>
#include <functional>
#include <vector>

#include "cm/core.hpp"
#include "cm/fft.hpp"

namespace cm {

// ---------------------------------------------------------------------------
// CircleFunction
// ---------------------------------------------------------------------------

/// Real samples on the uniform grid t_j = 2*pi*j/n, n a power of two.
struct CircleFunction {
    std::vector<double> samples;

    explicit CircleFunction(std::vector<double> s) : samples(std::move(s)) {
        if (!is_pow2(samples.size()) || samples.size() < 8)
            throw std::invalid_argument("CircleFunction: grid size must be a power of two >= 8");
        for (double v : samples)
            if (!std::isfinite(v)) throw std::invalid_argument("CircleFunction: non-finite sample");
    }

    static CircleFunction from_function(const std::function<double(double)>& f, std::size_t n) {
        std::vector<double> s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        return CircleFunction(std::move(s));
    }

    std::size_t size() const { return samples.size(); }
};

// ---------------------------------------------------------------------------
// CircleHomeomorphism
// ---------------------------------------------------------------------------

/// Sense-preserving circle homeomorphism given by a strictly increasing lift
/// H on the uniform grid with H(t + 2*pi) = H(t) + 2*pi. An optional exact
/// lift callable overrides interpolation where available (analytic families).
class CircleHomeomorphism {
public:
    CircleHomeomorphism(std::vector<double> lift_samples,
                        std::function<double(double)> exact_lift = nullptr)
        : lift_(std::move(lift_samples)), exact_(std::move(exact_lift)) {
        const std::size_t n = lift_.size();
        if (!is_pow2(n) || n < 8)
            throw std::invalid_argument("CircleHomeomorphism: grid size must be a power of two >= 8");
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (!(lift_[j + 1] > lift_[j]))
                throw std::invalid_argument("CircleHomeomorphism: lift not strictly increasing");
        if (!(lift_[0] + kTwoPi > lift_[n - 1]))
            throw std::invalid_argument("CircleHomeomorphism: lift violates degree-1 periodicity");
    }

    static CircleHomeomorphism from_lift(const std::function<double(double)>& lift, std::size_t n) {
        std::vector<double> s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = lift(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        return CircleHomeomorphism(std::move(s), lift);
    }

    static CircleHomeomorphism identity(std::size_t n) {
        return from_lift([](double t) { return t; }, n);
    }

    std::size_t size() const { return lift_.size(); }
    const std::vector<double>& lift_samples() const { return lift_; }
    bool has_exact() const { return static_cast<bool>(exact_); }

    /// Lift value at arbitrary parameter (exact callable or periodic
    /// monotone-cubic interpolation of the grid samples).
    double lift(double t) const {
        if (exact_) return exact_(t);
        const std::size_t n = lift_.size();
        double k = std::floor(t / kTwoPi);
        double t0 = t - k * kTwoPi;
        double x = t0 * static_cast<double>(n) / kTwoPi;
        std::size_t j = std::min(static_cast<std::size_t>(x), n - 1);
        double u = x - static_cast<double>(j);
        double h0 = sample_lift(j), h1 = sample_lift(j + 1);
        double m0 = slope(j), m1 = slope(j + 1);
        double dt = kTwoPi / static_cast<double>(n);
        // monotone Hermite (Fritsch-Carlson limited slopes)
        double d = (h1 - h0) / dt;
        m0 = limit_slope(m0, d);
        m1 = limit_slope(m1, d);
        double v = h0 * (2 * u * u * u - 3 * u * u + 1) + dt * m0 * (u * u * u - 2 * u * u + u) +
                   h1 * (-2 * u * u * u + 3 * u * u) + dt * m1 * (u * u * u - u * u);
        return v + k * kTwoPi;
    }

    /// Image point on the circle.
    Cpx point(double t) const { return std::polar(1.0, lift(t)); }

    /// Inverse lift: the unique t with lift(t) = y.
    double inverse_lift(double y) const {
        const std::size_t n = lift_.size();
        double k = std::floor((y - lift_[0]) / kTwoPi);
        double y0 = y - k * kTwoPi;  // now lift_[0] <= y0 < lift_[0] + 2*pi
        std::size_t j = std::upper_bound(lift_.begin(), lift_.end(), y0) - lift_.begin();
        double lo_t = kTwoPi * static_cast<double>(j == 0 ? 0 : j - 1) / static_cast<double>(n);
        double hi_t = kTwoPi * static_cast<double>(j == 0 ? 1 : j) / static_cast<double>(n);
        // bisection on the (monotone) lift, then a secant polish
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo_t + hi_t);
            if (lift(mid) < y0)
                lo_t = mid;
            else
                hi_t = mid;
        }
        return 0.5 * (lo_t + hi_t) + k * kTwoPi;
    }

    /// Derivative samples h'(t_j): spectral derivative of the periodic part.
    std::vector<double> derivative_samples() const {
        const std::size_t n = lift_.size();
        std::vector<double> periodic(n);
        for (std::size_t j = 0; j < n; ++j)
            periodic[j] = lift_[j] - kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        auto d = spectral_derivative(periodic);
        for (double& v : d) v += 1.0;
        return d;
    }

private:
    double sample_lift(std::size_t j) const {
        const std::size_t n = lift_.size();
        return lift_[j % n] + kTwoPi * static_cast<double>(j / n);
    }
    double slope(std::size_t j) const {
        const std::size_t n = lift_.size();
        double dt = kTwoPi / static_cast<double>(n);
        double prev = j == 0 ? lift_[n - 1] - kTwoPi : sample_lift(j - 1);
        return (sample_lift(j + 1) - prev) / (2 * dt);
    }
    static double limit_slope(double m, double d) {
        if (d <= 0) return 0;
        return std::clamp(m, 0.0, 3.0 * d);
    }

    std::vector<double> lift_;
    std::function<double(double)> exact_;
};

// ---------------------------------------------------------------------------
// ArcFamily
// ---------------------------------------------------------------------------

/// Dyadic arcs over a uniform n-sample circle grid, levels 0..depth. Level l
/// partitions the circle into 2^l arcs of n/2^l consecutive samples.
struct ArcFamily {
    std::size_t n = 0;
    std::size_t depth = 0;

    struct Arc {
        std::size_t level, start, len;  // start index and length in samples
    };

    static ArcFamily dyadic(std::size_t n, std::size_t depth) {
        if (!is_pow2(n)) throw std::invalid_argument("ArcFamily: n must be a power of two");
        if ((n >> depth) < 1) throw std::invalid_argument("ArcFamily: depth too large");
        return {n, depth};
    }

    /// Default depth log2(n) - 4 (arcs never shorter than 16 samples).
    static ArcFamily dyadic_default(std::size_t n) {
        std::size_t d = 0;
        while ((n >> (d + 1)) >= 16) ++d;
        return dyadic(n, d);
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t l = 0; l <= depth; ++l) {
            std::size_t len = n >> l;
            for (std::size_t a = 0; a < (std::size_t(1) << l); ++a) f(Arc{l, a * len, len});
        }
    }
};

}  // namespace cm
