#pragma once
// Jordan curves as uniform-parameter sample polylines, together with the
// geometric estimators used throughout: chord-arc and Ahlfors-regularity
// constants, point-curve distance, and winding-number point location.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cm/core.hpp"

namespace cm {

// ---------------------------------------------------------------------------
// Curve family descriptors
// ---------------------------------------------------------------------------

struct CircleFamily {};
struct EllipseFamily { double c = 0.2; };                 // semi-axes 1+c, 1-c
struct PolygonFamily { std::vector<Cpx> vertices; };
struct PolyimageFamily { double c = 0.3; };               // image of e^{it} + c e^{2it}
struct LensFamily { double alpha = 1.0; };                // corners at +-1, interior angle alpha*pi
struct StarFamily { double a = 0.1; int k = 3; };         // rho(t) = 1 + a cos(k t)
struct KochFamily { int level = 1; };                     // snowflake prefractal

using CurveFamily = std::variant<CircleFamily, EllipseFamily, PolygonFamily,
                                 PolyimageFamily, LensFamily, StarFamily, KochFamily>;

inline std::string family_name(const CurveFamily& f) {
    struct V {
        std::string operator()(const CircleFamily&) const { return "circle"; }
        std::string operator()(const EllipseFamily&) const { return "ellipse"; }
        std::string operator()(const PolygonFamily&) const { return "polygon"; }
        std::string operator()(const PolyimageFamily&) const { return "polyimage"; }
        std::string operator()(const LensFamily&) const { return "lens"; }
        std::string operator()(const StarFamily&) const { return "star"; }
        std::string operator()(const KochFamily&) const { return "koch"; }
    };
    return std::visit(V{}, f);
}

// ---------------------------------------------------------------------------
// JordanCurve
// ---------------------------------------------------------------------------

class JordanCurve {
public:
    JordanCurve(std::vector<Cpx> samples, CurveFamily family, bool check_simple = true)
        : samples_(std::move(samples)), family_(std::move(family)) {
        validate(check_simple);
        build_cache();
    }

    const std::vector<Cpx>& samples() const { return samples_; }
    const CurveFamily& family() const { return family_; }
    std::size_t size() const { return samples_.size(); }
    Cpx at(std::size_t i) const { return samples_[i % samples_.size()]; }

    /// Polyline arclength from sample 0 to sample i (prefix sums; total at i = N).
    double arclength_to(std::size_t i) const { return prefix_[i]; }
    double total_length() const { return prefix_.back(); }
    double diameter() const { return diameter_; }
    double on_boundary_tol() const { return kOnBoundaryRel * diameter_; }

private:
    void validate(bool check_simple);
    void build_cache();

    std::vector<Cpx> samples_;
    CurveFamily family_;
    std::vector<double> prefix_;
    double diameter_ = 0;
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ChordArcReport {
    double constant = 1.0;              // >= 1
    std::pair<Cpx, Cpx> witness_pair;   // realizes the reported ratio
};

struct RegularityReport {
    double constant = 0.0;              // > 0
    Cpx witness_center;
    double witness_radius = 0.0;
};

enum class PointLocation { Inside, Outside, OnBoundary };

// ---------------------------------------------------------------------------
// Low-level segment helpers
// ---------------------------------------------------------------------------

inline double point_segment_distance(Cpx p, Cpx a, Cpx b) {
    Cpx ab = b - a;
    double len2 = norm2(ab);
    if (len2 == 0) return std::abs(p - a);
    double t = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

/// Length of the part of segment [a,b] lying in the open disk D(c, r).
inline double segment_length_in_disk(Cpx a, Cpx b, Cpx c, double r) {
    Cpx d = b - a;
    double A = norm2(d);
    if (A == 0) return 0;
    Cpx f = a - c;
    double B = 2 * (f.real() * d.real() + f.imag() * d.imag());
    double C = norm2(f) - r * r;
    double disc = B * B - 4 * A * C;
    if (disc <= 0) return 0;
    double s = std::sqrt(disc);
    double t0 = std::clamp((-B - s) / (2 * A), 0.0, 1.0);
    double t1 = std::clamp((-B + s) / (2 * A), 0.0, 1.0);
    return (t1 - t0) * std::sqrt(A);
}

inline bool segments_properly_intersect(Cpx p1, Cpx p2, Cpx q1, Cpx q2) {
    auto cross = [](Cpx u, Cpx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    double d1 = cross(q2 - q1, p1 - q1);
    double d2 = cross(q2 - q1, p2 - q1);
    double d3 = cross(p2 - p1, q1 - p1);
    double d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// ---------------------------------------------------------------------------
// JordanCurve internals
// ---------------------------------------------------------------------------

inline void JordanCurve::validate(bool check_simple) {
    const std::size_t n = samples_.size();
    if (n < 64 || !is_pow2(n))
        throw std::invalid_argument("JordanCurve: sample count must be a power of two >= 64");
    for (const Cpx& z : samples_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("JordanCurve: non-finite sample");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(samples_[(i + 1) % n] - samples_[i]) <= 0)
            throw std::invalid_argument("JordanCurve: zero-length sample segment");
    }
    double area2 = 0, ext = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Cpx a = samples_[i], b = samples_[(i + 1) % n];
        area2 += a.real() * b.imag() - a.imag() * b.real();
        ext = std::max({ext, std::abs(a.real()), std::abs(a.imag())});
    }
    if (std::abs(area2) <= 1e-12 * sqr(ext))
        throw std::invalid_argument("JordanCurve: degenerate (enclosed area is zero)");
    if (!check_simple) return;

    // Sweep over segments sorted by min-x; only x-overlapping pairs are tested.
    struct Seg { double x0, x1; std::size_t i; };
    std::vector<Seg> segs(n);
    for (std::size_t i = 0; i < n; ++i) {
        Cpx a = samples_[i], b = samples_[(i + 1) % n];
        segs[i] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()), i};
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& u, const Seg& v) { return u.x0 < v.x0; });
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n && segs[v].x0 <= segs[u].x1; ++v) {
            std::size_t i = segs[u].i, j = segs[v].i;
            if (i == j) continue;
            std::size_t lo = std::min(i, j), hi = std::max(i, j);
            if (hi - lo == 1 || (lo == 0 && hi == n - 1)) continue;  // adjacent share a vertex
            if (segments_properly_intersect(samples_[i], samples_[(i + 1) % n],
                                            samples_[j], samples_[(j + 1) % n]))
                throw std::invalid_argument("JordanCurve: self-intersection detected");
        }
    }
}

inline void JordanCurve::build_cache() {
    const std::size_t n = samples_.size();
    prefix_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix_[i + 1] = prefix_[i] + std::abs(samples_[(i + 1) % n] - samples_[i]);
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + n / 2; j < i + n; ++j)  // diameter pairs are near-antipodal in parameter
            d2 = std::max(d2, norm2(samples_[j % n] - samples_[i]));
    // The parameter heuristic can miss the diameter for very lopsided curves;
    // fall back to the exact quadratic scan for small n.
    if (n <= 1024) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) d2 = std::max(d2, norm2(samples_[j] - samples_[i]));
    }
    diameter_ = std::sqrt(d2);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Raw snowflake generator vertices at the given level: 3*4^level points.
inline std::vector<Cpx> koch_vertices(int level) {
    if (level < 0 || level > 8) throw std::invalid_argument("koch level out of range [0,8]");
    std::vector<Cpx> v = {std::polar(1.0, kPi / 2), std::polar(1.0, kPi / 2 + kTwoPi / 3),
                          std::polar(1.0, kPi / 2 + 2 * kTwoPi / 3)};
    const Cpx rot = std::polar(1.0, -kPi / 3);  // outward spikes for a CCW polygon
    for (int l = 0; l < level; ++l) {
        std::vector<Cpx> next;
        next.reserve(v.size() * 4);
        for (std::size_t i = 0; i < v.size(); ++i) {
            Cpx a = v[i], b = v[(i + 1) % v.size()];
            Cpx d = (b - a) / 3.0;
            next.push_back(a);
            next.push_back(a + d);
            next.push_back(a + d + d * rot);
            next.push_back(a + 2.0 * d);
        }
        v = std::move(next);
    }
    return v;
}

/// Uniform-arclength resampling of a closed polygon given by its vertices.
inline std::vector<Cpx> resample_polygon(const std::vector<Cpx>& verts, std::size_t n) {
    const std::size_t m = verts.size();
    std::vector<double> pre(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) pre[i + 1] = pre[i] + std::abs(verts[(i + 1) % m] - verts[i]);
    const double total = pre[m];
    std::vector<Cpx> out(n);
    std::size_t seg = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = total * static_cast<double>(j) / static_cast<double>(n);
        while (seg + 1 < m && pre[seg + 1] <= s) ++seg;
        double t = (s - pre[seg]) / (pre[seg + 1] - pre[seg]);
        out[j] = verts[seg] + t * (verts[(seg + 1) % m] - verts[seg]);
    }
    return out;
}

inline JordanCurve generate_curve(const CurveFamily& family, std::size_t n) {
    if (n < 64 || !is_pow2(n))
        throw std::invalid_argument("generate_curve: n must be a power of two >= 64");
    std::vector<Cpx> s(n);
    auto theta = [n](std::size_t j) { return kTwoPi * static_cast<double>(j) / static_cast<double>(n); };

    if (std::holds_alternative<CircleFamily>(family)) {
        for (std::size_t j = 0; j < n; ++j) s[j] = std::polar(1.0, theta(j));
        return JordanCurve(std::move(s), family, false);
    }
    if (const auto* e = std::get_if<EllipseFamily>(&family)) {
        if (e->c <= -1 || e->c >= 1) throw std::invalid_argument("ellipse: need |c| < 1");
        for (std::size_t j = 0; j < n; ++j)
            s[j] = Cpx((1 + e->c) * std::cos(theta(j)), (1 - e->c) * std::sin(theta(j)));
        return JordanCurve(std::move(s), family, false);
    }
    if (const auto* p = std::get_if<PolygonFamily>(&family)) {
        if (p->vertices.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
        return JordanCurve(resample_polygon(p->vertices, n), family, true);
    }
    if (const auto* pi = std::get_if<PolyimageFamily>(&family)) {
        if (std::abs(pi->c) >= 0.5) throw std::invalid_argument("polyimage: need |c| < 1/2");
        for (std::size_t j = 0; j < n; ++j) {
            double t = theta(j);
            s[j] = std::polar(1.0, t) + pi->c * std::polar(1.0, 2 * t);
        }
        return JordanCurve(std::move(s), family, false);
    }
    if (const auto* le = std::get_if<LensFamily>(&family)) {
        if (le->alpha <= 0 || le->alpha >= 2) throw std::invalid_argument("lens: need alpha in (0,2)");
        for (std::size_t j = 0; j < n; ++j) {
            Cpx z = std::polar(1.0, theta(j));
            Cpx p = std::pow(1.0 + z, le->alpha), q = std::pow(1.0 - z, le->alpha);
            s[j] = (p - q) / (p + q);
        }
        return JordanCurve(std::move(s), family, false);
    }
    if (const auto* st = std::get_if<StarFamily>(&family)) {
        if (st->a < 0 || st->k < 1 || st->a * st->k >= 1)
            throw std::invalid_argument("star: need a >= 0, k >= 1, a*k < 1");
        for (std::size_t j = 0; j < n; ++j) {
            double t = theta(j);
            s[j] = std::polar(1.0 + st->a * std::cos(st->k * t), t);
        }
        return JordanCurve(std::move(s), family, false);
    }
    const auto& k = std::get<KochFamily>(family);
    auto verts = koch_vertices(k.level);
    return JordanCurve(resample_polygon(verts, n), family, true);
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

/// Min-arc / chord ratio for one sample pair.
inline double chord_arc_ratio(const JordanCurve& c, std::size_t i, std::size_t j) {
    double total = c.total_length();
    double arc = std::abs(c.arclength_to(j) - c.arclength_to(i));
    arc = std::min(arc, total - arc);
    double chord = std::abs(c.at(j) - c.at(i));
    if (chord <= c.on_boundary_tol())
        throw std::invalid_argument("chord_arc: degenerate chord between samples");
    return arc / chord;
}

inline ChordArcReport chord_arc_constant(const JordanCurve& c) {
    const std::size_t n = c.size();
    double best = 1.0;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < n; ++i) {
        double si = c.arclength_to(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            double arc = c.arclength_to(j) - si;
            arc = std::min(arc, c.total_length() - arc);
            double chord2 = norm2(c.at(j) - c.at(i));
            if (chord2 <= sqr(c.on_boundary_tol()))
                throw std::invalid_argument("chord_arc: degenerate chord between samples");
            if (arc * arc > best * best * chord2) {
                best = arc / std::sqrt(chord2);
                bi = i;
                bj = j;
            }
        }
    }
    return {std::max(best, 1.0), {c.at(bi), c.at(bj)}};
}

inline double distance_to_curve(Cpx p, const JordanCurve& c) {
    const std::size_t n = c.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, c.at(i), c.at(i + 1)));
    return best;
}

inline RegularityReport ahlfors_constant(const JordanCurve& c, const std::vector<Cpx>& centers,
                                         const std::vector<double>& radii) {
    if (centers.empty() || radii.empty())
        throw std::invalid_argument("ahlfors_constant: empty grids");
    for (double r : radii)
        if (r <= 0) throw std::invalid_argument("ahlfors_constant: radii must be positive");
    RegularityReport rep;
    const std::size_t n = c.size();
    for (const Cpx& z : centers) {
        for (double r : radii) {
            double len = 0;
            for (std::size_t i = 0; i < n; ++i)
                len += segment_length_in_disk(c.at(i), c.at(i + 1), z, r);
            if (len / r > rep.constant) rep = {len / r, z, r};
        }
    }
    return rep;
}

/// Default Ahlfors test grid: the curve's own samples plus interior lattice
/// points as centers, log-spaced radii up to the diameter.
inline RegularityReport ahlfors_constant(const JordanCurve& c, std::size_t n_radii = 32) {
    std::vector<Cpx> centers(c.samples().begin(), c.samples().end());
    std::vector<double> radii(n_radii);
    double d = c.diameter();
    for (std::size_t k = 0; k < n_radii; ++k)
        radii[k] = d * std::pow(1e-3, 1.0 - static_cast<double>(k) / (n_radii - 1));
    return ahlfors_constant(c, centers, radii);
}

inline PointLocation locate_point(Cpx p, const JordanCurve& c) {
    if (distance_to_curve(p, c) <= c.on_boundary_tol()) return PointLocation::OnBoundary;
    double angle = 0;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        Cpx a = c.at(i) - p, b = c.at(i + 1) - p;
        angle += std::atan2(a.real() * b.imag() - a.imag() * b.real(),
                            a.real() * b.real() + a.imag() * b.imag());
    }
    int winding = static_cast<int>(std::lround(angle / kTwoPi));
    return winding != 0 ? PointLocation::Inside : PointLocation::Outside;
}

inline bool contains(Cpx p, const JordanCurve& c) {
    return locate_point(p, c) == PointLocation::Inside;
}

}  // namespace cm
