#pragma once
// Function-space diagnostics on the circle and on holomorphic fields:
// mean oscillation (BMO/VMO), the Coifman-Fefferman A-infinity condition,
// quasisymmetry moduli, Schwarzian derivatives with the cocycle identity,
// and the sup-weighted / Carleson-weighted norms of exterior holomorphic
// functions.

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "cm/circle.hpp"
#include "cm/confmap.hpp"
#include "cm/core.hpp"
#include "cm/measure.hpp"

namespace cm {

// ---------------------------------------------------------------------------
// Mean oscillation
// ---------------------------------------------------------------------------

struct BmoReport {
    double norm = 0;
    std::size_t arc_start = 0, arc_len = 0;  // worst arc, in samples
};

/// Sup of mean |f - f_I| over quasi-dyadic arcs: every dyadic length of the
/// family, at every translate (pure dyadic undershoots the supremum).
inline BmoReport bmo_norm(const CircleFunction& f, const ArcFamily& arcs) {
    const std::size_t n = f.size();
    if (arcs.n != n) throw std::invalid_argument("bmo_norm: arc family grid mismatch");
    std::vector<double> pre(2 * n + 1, 0.0);
    for (std::size_t j = 0; j < 2 * n; ++j) pre[j + 1] = pre[j] + f.samples[j % n];
    BmoReport rep;
    for (std::size_t l = 0; l <= arcs.depth; ++l) {
        const std::size_t len = n >> l;
        for (std::size_t s = 0; s < n; ++s) {
            double mean = (pre[s + len] - pre[s]) / static_cast<double>(len);
            double osc = 0;
            for (std::size_t j = s; j < s + len; ++j) osc += std::abs(f.samples[j % n] - mean);
            osc /= static_cast<double>(len);
            if (osc > rep.norm) rep = {osc, s, len};
        }
    }
    return rep;
}

/// Per-scale suprema of mean oscillation; decay to zero diagnoses VMO.
inline std::vector<std::pair<double, double>> vmo_profile(const CircleFunction& f,
                                                          const ArcFamily& arcs) {
    const std::size_t n = f.size();
    if (arcs.n != n) throw std::invalid_argument("vmo_profile: arc family grid mismatch");
    std::vector<double> pre(2 * n + 1, 0.0);
    for (std::size_t j = 0; j < 2 * n; ++j) pre[j + 1] = pre[j] + f.samples[j % n];
    std::vector<std::pair<double, double>> out;
    for (std::size_t l = 0; l <= arcs.depth; ++l) {
        const std::size_t len = n >> l;
        double sup = 0;
        for (std::size_t s = 0; s < n; ++s) {
            double mean = (pre[s + len] - pre[s]) / static_cast<double>(len);
            double osc = 0;
            for (std::size_t j = s; j < s + len; ++j) osc += std::abs(f.samples[j % n] - mean);
            sup = std::max(sup, osc / static_cast<double>(len));
        }
        out.emplace_back(kTwoPi * static_cast<double>(len) / static_cast<double>(n), sup);
    }
    return out;
}

// ---------------------------------------------------------------------------
// A-infinity (Coifman-Fefferman) condition
// ---------------------------------------------------------------------------

enum class SubsetScheme { LevelSets, SubarcUnions, Both };

struct AInftyReport {
    bool pass = true;
    double beta_used = 0.25;
    double c1 = 0, c2 = 0;        // fitted exponents for condition (1a)
    double worst_ratio = 1.0;     // min over arcs of omega(E)/omega(I) at |E|/|I| = 1/2
    std::size_t worst_arc_start = 0, worst_arc_len = 0;
};

/// Tests condition (2a): omega(E)/omega(I) < beta forces |E|/|I| < 1/2, over
/// all dyadic arcs with E ranging over weight level sets (the exact minimizer
/// of the mass ratio at fixed size) and optionally unions of <= 8 sub-arcs.
/// Condition (1a) exponents come from a log-log least-squares fit over the
/// collected (|E|/|I|, omega(E)/omega(I)) pairs.
inline AInftyReport a_infty_check(const CircleFunction& omega, const ArcFamily& arcs,
                                  SubsetScheme scheme = SubsetScheme::Both, double beta = 0.25) {
    const std::size_t n = omega.size();
    if (arcs.n != n) throw std::invalid_argument("a_infty_check: arc family grid mismatch");
    double total = 0;
    for (double w : omega.samples) {
        if (w < 0) throw std::invalid_argument("a_infty_check: weight must be nonnegative");
        total += w;
    }
    if (total <= 0) throw std::invalid_argument("a_infty_check: identically-zero weight");

    AInftyReport rep;
    rep.beta_used = beta;
    std::vector<double> fit_x, fit_y;
    std::vector<double> vals;
    arcs.for_each([&](const ArcFamily::Arc& a) {
        vals.resize(a.len);
        double arc_mass = 0;
        for (std::size_t j = 0; j < a.len; ++j) {
            vals[j] = omega.samples[(a.start + j) % n];
            arc_mass += vals[j];
        }
        std::sort(vals.begin(), vals.end());
        const std::size_t half = (a.len + 1) / 2;
        if (arc_mass <= 0) {
            // a full arc of zero weight: the half-size subset already violates (2a)
            if (0.0 < rep.worst_ratio) {
                rep.worst_ratio = 0.0;
                rep.worst_arc_start = a.start;
                rep.worst_arc_len = a.len;
            }
            rep.pass = false;
            return;
        }
        double mass = 0;
        for (std::size_t k = 0; k < a.len; ++k) {
            mass += vals[k];
            double frac = static_cast<double>(k + 1) / static_cast<double>(a.len);
            double ratio = mass / arc_mass;
            if (scheme != SubsetScheme::SubarcUnions && ratio > 0 && frac < 1) {
                fit_x.push_back(std::log(frac));
                fit_y.push_back(std::log(ratio));
            }
            if (k + 1 == half) {
                if (ratio < rep.worst_ratio) {
                    rep.worst_ratio = ratio;
                    rep.worst_arc_start = a.start;
                    rep.worst_arc_len = a.len;
                }
                if (ratio < beta) rep.pass = false;
            }
        }
        if (scheme != SubsetScheme::LevelSets && a.len >= 16) {
            // union of the 8 lightest of 16 equal sub-arcs (half the measure)
            const std::size_t block = a.len / 16;
            std::vector<double> bm(16, 0.0);
            for (std::size_t b = 0; b < 16; ++b)
                for (std::size_t j = 0; j < block; ++j)
                    bm[b] += omega.samples[(a.start + b * block + j) % n];
            std::sort(bm.begin(), bm.end());
            double mass8 = std::accumulate(bm.begin(), bm.begin() + 8, 0.0);
            double ratio = mass8 / arc_mass;
            if (ratio < beta) rep.pass = false;
            if (ratio > 0) {
                fit_x.push_back(std::log(0.5));
                fit_y.push_back(std::log(ratio));
            }
        }
    });

    if (fit_x.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < fit_x.size(); ++i) {
            sx += fit_x[i];
            sy += fit_y[i];
            sxx += fit_x[i] * fit_x[i];
            sxy += fit_x[i] * fit_y[i];
        }
        double m = static_cast<double>(fit_x.size());
        double denom = m * sxx - sx * sx;
        if (std::abs(denom) > 1e-12) {
            rep.c1 = (m * sxy - sx * sy) / denom;
            rep.c2 = std::exp((sy - rep.c1 * sx) / m);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Quasisymmetry
// ---------------------------------------------------------------------------

inline double qs_ratio(const CircleHomeomorphism& h, double theta, double t) {
    double num = std::abs(h.point(theta + t) - h.point(theta));
    double den = std::abs(h.point(theta) - h.point(theta - t));
    return num / den;
}

/// Sup over a (theta, t) grid of max(ratio, 1/ratio) for the adjacent-arc
/// image ratio.
inline double quasisymmetry_modulus(const CircleHomeomorphism& h, const std::vector<double>& ts) {
    const std::size_t n = h.size();
    double M = 1.0;
    for (double t : ts) {
        if (!(t > 0)) throw std::invalid_argument("quasisymmetry_modulus: t grid must be positive");
        for (std::size_t j = 0; j < n; ++j) {
            double r = qs_ratio(h, kTwoPi * static_cast<double>(j) / static_cast<double>(n), t);
            M = std::max({M, r, 1.0 / r});
        }
    }
    return M;
}

inline std::vector<double> default_t_grid(std::size_t count = 256) {
    std::vector<double> ts(count);
    for (std::size_t k = 0; k < count; ++k)
        ts[k] = kPi * std::pow(1e-3, 1.0 - static_cast<double>(k + 1) / static_cast<double>(count));
    return ts;
}

/// Per-t suprema of |ratio - 1|; decay to zero diagnoses symmetry.
inline std::vector<std::pair<double, double>> symmetric_profile(const CircleHomeomorphism& h,
                                                                const std::vector<double>& ts) {
    const std::size_t n = h.size();
    std::vector<std::pair<double, double>> out;
    for (double t : ts) {
        double sup = 0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, std::abs(qs_ratio(h, kTwoPi * static_cast<double>(j) / static_cast<double>(n), t) - 1.0));
        out.emplace_back(t, sup);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schwarzian derivative
// ---------------------------------------------------------------------------

enum class SchwarzScheme { Analytic, FiniteDifference };

inline Cpx schwarzian_from(const DerivTriple& d) {
    Cpx q = d.f2 / d.f1;
    return d.f3 / d.f1 - 1.5 * q * q;
}

inline double boundary_distance_in_domain(const ConformalMap& map, Cpx z) {
    return map.direction() == MapDirection::DiskToInterior ? 1.0 - std::abs(z) : std::abs(z) - 1.0;
}

/// S(f) = f'''/f' - (3/2)(f''/f')^2. The analytic scheme uses the family's
/// closed-form derivatives. The finite-difference scheme averages 5-point
/// central stencils taken along the real and imaginary directions, with step
/// proportional to the distance to the domain boundary: the direction factor
/// e^{2 i beta} flips sign between the two axes and cancels the leading s^2
/// truncation term of the third-derivative stencil, which lets the step stay
/// above the double-precision roundoff floor.
inline Cpx schwarzian(const ConformalMap& map, Cpx z, SchwarzScheme scheme = SchwarzScheme::Analytic) {
    if (scheme == SchwarzScheme::Analytic) return schwarzian_from(map.derivatives3(z));
    double d = boundary_distance_in_domain(map, z);
    if (d <= 0) throw std::invalid_argument("schwarzian: point not interior to the map's domain");
    double s = 2e-3 * d;
    if (2 * s >= d) throw std::invalid_argument("schwarzian: stencil crosses the boundary");
    Cpx f0 = map.value(z);
    DerivTriple acc{Cpx(0), Cpx(0), Cpx(0)};
    for (Cpx dir : {Cpx(1, 0), Cpx(0, 1)}) {
        Cpx h = s * dir;
        Cpx fm2 = map.value(z - 2.0 * h), fm1 = map.value(z - h);
        Cpx fp1 = map.value(z + h), fp2 = map.value(z + 2.0 * h);
        acc.f1 += (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        acc.f2 += (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        acc.f3 += (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    }
    return schwarzian_from({0.5 * acc.f1, 0.5 * acc.f2, 0.5 * acc.f3});
}

/// Derivative triple of f(g(z)) by the chain rule.
inline DerivTriple compose_derivatives3(const ConformalMap& f, const ConformalMap& g, Cpx z) {
    DerivTriple dg = g.derivatives3(z);
    DerivTriple df = f.derivatives3(g.value(z));
    Cpx d1 = df.f1 * dg.f1;
    Cpx d2 = df.f2 * dg.f1 * dg.f1 + df.f1 * dg.f2;
    Cpx d3 = df.f3 * dg.f1 * dg.f1 * dg.f1 + 3.0 * df.f2 * dg.f1 * dg.f2 + df.f1 * dg.f3;
    return {d1, d2, d3};
}

/// |S(f o g)(z) - S(f)(g(z)) g'(z)^2 - S(g)(z)|.
inline double cocycle_residual(const ConformalMap& f, const ConformalMap& g, Cpx z) {
    Cpx lhs = schwarzian_from(compose_derivatives3(f, g, z));
    DerivTriple dg = g.derivatives3(z);
    Cpx rhs = schwarzian_from(f.derivatives3(g.value(z))) * dg.f1 * dg.f1 + schwarzian_from(dg);
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Exterior holomorphic norms
// ---------------------------------------------------------------------------

/// Holomorphic function on the exterior disk 1 < |z|, with its decay order at
/// infinity (>= 4 for Schwarzians of maps normalized to z + O(1)).
struct HolomorphicSample {
    std::function<Cpx(Cpx)> f;
    int decay_order = 4;
    std::size_t n_theta = 256;
};

namespace detail {
/// Shell radii accumulating at |z| = 1 and marching geometrically to 1e6,
/// emulating the compactification at infinity.
inline std::vector<double> exterior_shell_radii(std::size_t per_decade = 12) {
    std::vector<double> rs;
    for (double d = 1e-4; d < 0.99; d *= std::pow(10.0, 1.0 / per_decade)) rs.push_back(1.0 + d);
    for (double r = 2.0; r <= 1e6; r *= std::pow(10.0, 1.0 / per_decade)) rs.push_back(r);
    return rs;
}
}  // namespace detail

/// sup (|z|^2 - 1)^2 |phi(z)| over the compactified exterior grid. Infinite
/// (flagged as +inf) when the recorded decay order is below 4.
inline double b_norm(const HolomorphicSample& phi) {
    if (phi.decay_order < 4) return std::numeric_limits<double>::infinity();
    double sup = 0;
    for (double r : detail::exterior_shell_radii()) {
        double w = sqr(r * r - 1.0);
        for (std::size_t j = 0; j < phi.n_theta; ++j) {
            Cpx z = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(phi.n_theta));
            sup = std::max(sup, w * std::abs(phi.f(z)));
        }
    }
    return sup;
}

/// Per-shell suprema of (|z|^2 - 1)^2 |phi| for |z| - 1 log-spaced near the
/// circle; decay to zero diagnoses membership in the little space.
inline std::vector<std::pair<double, double>> b0_profile(const HolomorphicSample& phi,
                                                         std::size_t shells = 24) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k < shells; ++k) {
        double d = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(k) / static_cast<double>(shells - 1));
        double r = 1.0 + d;
        double w = sqr(r * r - 1.0);
        double sup = 0;
        for (std::size_t j = 0; j < phi.n_theta; ++j) {
            Cpx z = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(phi.n_theta));
            sup = std::max(sup, w * std::abs(phi.f(z)));
        }
        out.emplace_back(d, sup);
    }
    return out;
}

/// Carleson-measure norm of d lambda_phi = |phi|^2 (|z|^2 - 1)^3 dxdy on the
/// exterior disk, measured against the unit circle. Atoms live on a polar
/// annulus graded toward the circle; radii beyond |z| = 3 cannot meet any
/// admissible disk (centers on the circle, radii <= 2) and are dropped.
inline CarlesonReport curly_b_norm(const HolomorphicSample& phi, const CarlesonGrid& grid,
                                   std::size_t n_shells = 96, std::size_t n_theta = 256) {
    auto circle = std::make_shared<JordanCurve>(generate_curve(CircleFamily{}, 256));
    std::vector<double> edges;  // |z| - 1 edges, geometric
    edges.push_back(1e-5);
    while (edges.back() < 2.0) edges.push_back(edges.back() * std::pow(2.0 / 1e-5, 1.0 / static_cast<double>(n_shells)));
    std::vector<Atom> atoms;
    const double dth = kTwoPi / static_cast<double>(n_theta);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double r0 = 1 + edges[i], r1 = 1 + edges[i + 1];
        double rc = 0.5 * (r0 + r1);
        double area = 0.5 * (r1 * r1 - r0 * r0) * dth;
        double w3 = std::pow(rc * rc - 1.0, 3.0);
        for (std::size_t j = 0; j < n_theta; ++j) {
            Cpx zc = std::polar(rc, dth * (static_cast<double>(j) + 0.5));
            double w = norm2(phi.f(zc)) * w3 * area;
            if (w > 0) atoms.push_back({zc, w});
        }
    }
    Measure lambda(std::move(atoms), circle, DomainSide::Exterior);
    return carleson_norm(lambda, grid);
}

inline CarlesonReport curly_b_norm(const HolomorphicSample& phi) {
    auto circle = generate_curve(CircleFamily{}, 256);
    return curly_b_norm(phi, default_grid(circle));
}

}  // namespace cm
