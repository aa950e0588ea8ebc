#pragma once
// Univalent map families with exact derivatives and inverses, a Theodorsen
// conjugate-function engine for star-like domains, Koebe distortion checks,
// atom transport (pull-back / push-forward) and conformal welding.

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "cm/circle.hpp"
#include "cm/core.hpp"
#include "cm/fft.hpp"
#include "cm/geometry.hpp"
#include "cm/measure.hpp"

namespace cm {

struct DerivTriple {
    Cpx f1, f2, f3;  // f', f'', f'''
};

// ---------------------------------------------------------------------------
// Analytic families
// ---------------------------------------------------------------------------

/// Disk automorphism e^{i rot} (z + a) / (1 + conj(a) z), |a| < 1.
struct MobiusMap {
    Cpx a;
    double rot = 0;
};

/// f(z) = z + c z^2, univalent on the disk for |c| < 1/2.
struct PolyMap {
    double c = 0.3;
};

/// Maps the disk onto the lens with corners +-1 and interior angle alpha*pi.
struct LensMap {
    double alpha = 1.0;
};

/// f(z) = z / (1 - z)^2 onto the slit plane C \ (-inf, -1/4].
struct KoebeMap {};

/// f(z) = z + c/z on the exterior disk, onto the exterior of an ellipse.
struct EllipseExteriorMap {
    double c = 0.2;
};

// ---------------------------------------------------------------------------
// Theodorsen maps
// ---------------------------------------------------------------------------

struct TheodorsenResult;

/// Numerical Riemann map of a star-like domain {r < rho(t)}: boundary
/// correspondence by conjugate-function fixed-point iteration, interior values
/// through the Taylor coefficients of log(f(z)/z).
class TheodorsenMap {
public:
    std::size_t n = 0;
    std::vector<double> theta;      // uniform grid
    std::vector<double> Theta;      // boundary correspondence Theta(theta)
    std::vector<double> log_rho;    // log rho(Theta(theta_j))
    std::vector<Cpx> coef;          // Taylor coefficients of g = log(f/z), length n/2
    std::vector<double> residual_history;
    bool converged = false;
    double epsilon = 0;             // measured sup |rho'/rho|
    double boundary_residual = 0;   // max |f(e^{i t_j}) - rho(Theta_j) e^{i Theta_j}|

    Cpx g_at(Cpx z) const {
        Cpx acc(0);
        for (std::size_t k = coef.size(); k > 0; --k) acc = acc * z + coef[k - 1];
        return acc;
    }
    Cpx g1_at(Cpx z) const {
        Cpx acc(0);
        for (std::size_t k = coef.size(); k > 1; --k)
            acc = acc * z + static_cast<double>(k - 1) * coef[k - 1];
        return acc;
    }
    Cpx g2_at(Cpx z) const {
        Cpx acc(0);
        for (std::size_t k = coef.size(); k > 2; --k)
            acc = acc * z + static_cast<double>((k - 1) * (k - 2)) * coef[k - 1];
        return acc;
    }
    Cpx g3_at(Cpx z) const {
        Cpx acc(0);
        for (std::size_t k = coef.size(); k > 3; --k)
            acc = acc * z + static_cast<double>((k - 1) * (k - 2) * (k - 3)) * coef[k - 1];
        return acc;
    }

    Cpx value(Cpx z) const { return z * std::exp(g_at(z)); }
    DerivTriple derivatives3(Cpx z) const {
        Cpx g1 = g1_at(z), g2 = g2_at(z), g3 = g3_at(z), e = std::exp(g_at(z));
        return {e * (1.0 + z * g1), e * (2.0 * g1 + z * g1 * g1 + z * g2),
                e * (3.0 * g2 + 3.0 * g1 * g1 + 3.0 * z * g1 * g2 + z * g1 * g1 * g1 + z * g3)};
    }

    /// Newton inversion seeded by the nearest sample of a coarse forward grid.
    Cpx inverse(Cpx w, double tol = 1e-13, int max_iter = 50) const {
        Cpx z = seed_points.empty() ? Cpx(0) : seed_points[0].first;
        double best = std::abs(seed_points.empty() ? value(z) - w : seed_points[0].second - w);
        for (const auto& [zz, ww] : seed_points) {
            double d = std::abs(ww - w);
            if (d < best) {
                best = d;
                z = zz;
            }
        }
        std::vector<Cpx> trace;
        for (int it = 0; it < max_iter; ++it) {
            Cpx f = value(z) - w;
            trace.push_back(z);
            if (std::abs(f) < tol) return z;
            Cpx d = derivatives3(z).f1;
            Cpx step = f / d;
            // stay inside the disk; halve the step if it escapes
            Cpx zn = z - step;
            int guard = 0;
            while (std::abs(zn) >= 1.0 && guard++ < 40) {
                step *= 0.5;
                zn = z - step;
            }
            z = zn;
        }
        if (std::abs(value(z) - w) < 1e3 * tol) return z;
        throw NewtonError("theodorsen inverse: Newton did not converge", trace);
    }

    std::vector<std::pair<Cpx, Cpx>> seed_points;  // (z, f(z)) forward grid
};

struct TheodorsenResult {
    std::shared_ptr<const TheodorsenMap> map;
    bool converged = false;
    std::vector<double> residual_history;
};

/// Build the Theodorsen map of the star-like domain {r e^{it}: r < rho(t)}.
/// Requires sup |rho'/rho| < 1 (checked on a refined grid); throws otherwise.
inline TheodorsenResult theodorsen_map(const std::function<double(double)>& rho, std::size_t n,
                                       double tol = 1e-12, int max_iter = 300) {
    if (!is_pow2(n) || n < 64)
        throw std::invalid_argument("theodorsen_map: n must be a power of two >= 64");
    // epsilon-condition check on a 4x refined grid
    const std::size_t m = 4 * n;
    std::vector<double> logr(m);
    for (std::size_t j = 0; j < m; ++j) {
        double r = rho(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
        if (!(r > 0)) throw std::invalid_argument("theodorsen_map: rho must be positive");
        logr[j] = std::log(r);
    }
    auto dlogr = spectral_derivative(logr);
    double eps = 0;
    for (double v : dlogr) eps = std::max(eps, std::abs(v));
    if (eps >= 1.0)
        throw std::invalid_argument("theodorsen_map: epsilon-condition violated (sup|rho'/rho| >= 1)");

    auto tm = std::make_shared<TheodorsenMap>();
    tm->n = n;
    tm->epsilon = eps;
    tm->theta.resize(n);
    for (std::size_t j = 0; j < n; ++j) tm->theta[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    tm->Theta = tm->theta;

    std::vector<double> u(n);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t j = 0; j < n; ++j) u[j] = std::log(rho(tm->Theta[j]));
        auto v = conjugate_function(u);
        double res = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double next = tm->theta[j] + v[j];
            res = std::max(res, std::abs(next - tm->Theta[j]));
            tm->Theta[j] = next;
        }
        tm->residual_history.push_back(res);
        if (res < tol) {
            tm->converged = true;
            break;
        }
    }

    tm->log_rho.resize(n);
    std::vector<Cpx> bnd(n);
    for (std::size_t j = 0; j < n; ++j) {
        tm->log_rho[j] = std::log(rho(tm->Theta[j]));
        bnd[j] = Cpx(tm->log_rho[j], tm->Theta[j] - tm->theta[j]);
    }
    tm->coef = analytic_coefficients(bnd);
    tm->coef[0] = Cpx(tm->coef[0].real(), 0.0);  // f'(0) > 0 normalization

    for (std::size_t j = 0; j < n; ++j) {
        Cpx f = tm->value(std::polar(1.0, tm->theta[j]));
        Cpx target = std::polar(std::exp(tm->log_rho[j]), tm->Theta[j]);
        tm->boundary_residual = std::max(tm->boundary_residual, std::abs(f - target));
    }

    for (double r : {0.15, 0.35, 0.55, 0.75, 0.9, 0.98}) {
        for (std::size_t j = 0; j < 64; ++j) {
            Cpx z = std::polar(r, kTwoPi * static_cast<double>(j) / 64.0);
            tm->seed_points.emplace_back(z, tm->value(z));
        }
    }
    return {tm, tm->converged, tm->residual_history};
}

/// Radius function of a star-like curve family, as a function of polar angle.
inline std::function<double(double)> radius_function(const CurveFamily& family) {
    if (std::holds_alternative<CircleFamily>(family)) return [](double) { return 1.0; };
    if (const auto* e = std::get_if<EllipseFamily>(&family)) {
        double a = 1 + e->c, b = 1 - e->c;
        return [a, b](double t) {
            return a * b / std::sqrt(sqr(b * std::cos(t)) + sqr(a * std::sin(t)));
        };
    }
    if (const auto* s = std::get_if<StarFamily>(&family)) {
        double a = s->a;
        int k = s->k;
        return [a, k](double t) { return 1.0 + a * std::cos(k * t); };
    }
    throw std::invalid_argument("radius_function: family has no star-like radius parametrization");
}

// ---------------------------------------------------------------------------
// ConformalMap
// ---------------------------------------------------------------------------

enum class MapDirection { DiskToInterior, ExteriorToExterior };

class ConformalMap {
public:
    using Rep = std::variant<MobiusMap, PolyMap, LensMap, KoebeMap, EllipseExteriorMap,
                             std::shared_ptr<const TheodorsenMap>>;

    ConformalMap(MobiusMap m) : rep_(m) { check(); }
    ConformalMap(PolyMap m) : rep_(m) { check(); }
    ConformalMap(LensMap m) : rep_(m) { check(); }
    ConformalMap(KoebeMap m) : rep_(m) {}
    ConformalMap(EllipseExteriorMap m) : rep_(m) { check(); }
    ConformalMap(std::shared_ptr<const TheodorsenMap> m) : rep_(std::move(m)) {
        if (!std::get<std::shared_ptr<const TheodorsenMap>>(rep_))
            throw std::invalid_argument("ConformalMap: null theodorsen map");
    }

    static ConformalMap identity() { return ConformalMap(MobiusMap{Cpx(0), 0.0}); }

    MapDirection direction() const {
        return std::holds_alternative<EllipseExteriorMap>(rep_) ? MapDirection::ExteriorToExterior
                                                                : MapDirection::DiskToInterior;
    }

    const Rep& rep() const { return rep_; }

    Cpx value(Cpx z) const {
        check_domain(z);
        return std::visit(
            [&](const auto& m) -> Cpx {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, MobiusMap>)
                    return std::polar(1.0, m.rot) * (z + m.a) / (1.0 + std::conj(m.a) * z);
                else if constexpr (std::is_same_v<T, PolyMap>)
                    return z + m.c * z * z;
                else if constexpr (std::is_same_v<T, LensMap>) {
                    Cpx p = std::pow(1.0 + z, m.alpha), q = std::pow(1.0 - z, m.alpha);
                    return (p - q) / (p + q);
                } else if constexpr (std::is_same_v<T, KoebeMap>)
                    return z / ((1.0 - z) * (1.0 - z));
                else if constexpr (std::is_same_v<T, EllipseExteriorMap>)
                    return z + m.c / z;
                else
                    return m->value(z);
            },
            rep_);
    }

    DerivTriple derivatives3(Cpx z) const {
        check_domain(z);
        return std::visit(
            [&](const auto& m) -> DerivTriple {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, MobiusMap>) {
                    Cpx ab = std::conj(m.a);
                    Cpx d = 1.0 + ab * z;
                    Cpx s = std::polar(1.0, m.rot) * (1.0 - norm2(m.a));
                    return {s / (d * d), -2.0 * ab * s / (d * d * d), 6.0 * ab * ab * s / (d * d * d * d)};
                } else if constexpr (std::is_same_v<T, PolyMap>)
                    return {1.0 + 2.0 * m.c * z, Cpx(2.0 * m.c), Cpx(0)};
                else if constexpr (std::is_same_v<T, LensMap>) {
                    double al = m.alpha;
                    Cpx p = std::pow(1.0 + z, al), q = std::pow(1.0 - z, al);
                    Cpx D = p + q;
                    Cpx dp = al * p / (1.0 + z), dq = -al * q / (1.0 - z);
                    Cpx D1 = dp + dq;
                    Cpx D2 = al * (al - 1.0) * (p / ((1.0 + z) * (1.0 + z)) + q / ((1.0 - z) * (1.0 - z)));
                    Cpx f1 = 4.0 * al * std::pow(1.0 + z, al - 1.0) * std::pow(1.0 - z, al - 1.0) / (D * D);
                    Cpx L = (al - 1.0) * (1.0 / (1.0 + z) - 1.0 / (1.0 - z)) - 2.0 * D1 / D;
                    Cpx L1 = -(al - 1.0) * (1.0 / ((1.0 + z) * (1.0 + z)) + 1.0 / ((1.0 - z) * (1.0 - z))) -
                             2.0 * (D2 * D - D1 * D1) / (D * D);
                    Cpx f2 = f1 * L;
                    Cpx f3 = f2 * L + f1 * L1;
                    return {f1, f2, f3};
                } else if constexpr (std::is_same_v<T, KoebeMap>) {
                    Cpx d = 1.0 - z;
                    return {(1.0 + z) / (d * d * d), 2.0 * (2.0 + z) / (d * d * d * d),
                            6.0 * (3.0 + z) / (d * d * d * d * d)};
                } else if constexpr (std::is_same_v<T, EllipseExteriorMap>)
                    return {1.0 - m.c / (z * z), 2.0 * m.c / (z * z * z), -6.0 * m.c / (z * z * z * z)};
                else
                    return m->derivatives3(z);
            },
            rep_);
    }

    Cpx derivative(Cpx z) const { return derivatives3(z).f1; }

    Cpx inverse(Cpx w) const {
        return std::visit(
            [&](const auto& m) -> Cpx {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, MobiusMap>) {
                    Cpx u = w * std::polar(1.0, -m.rot);
                    return (u - m.a) / (1.0 - std::conj(m.a) * u);
                } else if constexpr (std::is_same_v<T, PolyMap>)
                    return 2.0 * w / (1.0 + std::sqrt(Cpx(1.0) + 4.0 * m.c * w));
                else if constexpr (std::is_same_v<T, LensMap>) {
                    Cpx W = std::pow((1.0 + w) / (1.0 - w), 1.0 / m.alpha);
                    return (W - 1.0) / (W + 1.0);
                } else if constexpr (std::is_same_v<T, KoebeMap>)
                    return 2.0 * w / (2.0 * w + 1.0 + std::sqrt(4.0 * w + 1.0));
                else if constexpr (std::is_same_v<T, EllipseExteriorMap>) {
                    Cpx s = std::sqrt(w * w - 4.0 * m.c);
                    Cpx z1 = 0.5 * (w + s), z2 = 0.5 * (w - s);
                    return std::abs(z1) >= std::abs(z2) ? z1 : z2;
                } else
                    return m->inverse(w);
            },
            rep_);
    }

    /// Boundary curve of the image domain, as a sampled Jordan curve.
    JordanCurve image_curve(std::size_t n) const {
        return std::visit(
            [&](const auto& m) -> JordanCurve {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, MobiusMap>)
                    return generate_curve(CircleFamily{}, n);
                else if constexpr (std::is_same_v<T, PolyMap>)
                    return generate_curve(PolyimageFamily{m.c}, n);
                else if constexpr (std::is_same_v<T, LensMap>)
                    return generate_curve(LensFamily{m.alpha}, n);
                else if constexpr (std::is_same_v<T, KoebeMap>)
                    throw std::invalid_argument("image curve unavailable: koebe image is unbounded");
                else if constexpr (std::is_same_v<T, EllipseExteriorMap>)
                    return generate_curve(EllipseFamily{m.c}, n);
                else {
                    std::vector<Cpx> s(n);
                    for (std::size_t j = 0; j < n; ++j) {
                        Cpx f = m->value(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
                        s[j] = f;
                    }
                    return JordanCurve(std::move(s), StarFamily{}, false);
                }
            },
            rep_);
    }

private:
    void check() const {
        if (const auto* m = std::get_if<MobiusMap>(&rep_)) {
            if (std::abs(m->a) >= 1) throw std::invalid_argument("mobius: need |a| < 1");
        } else if (const auto* p = std::get_if<PolyMap>(&rep_)) {
            if (std::abs(p->c) >= 0.5) throw std::invalid_argument("polymap: need |c| < 1/2");
        } else if (const auto* l = std::get_if<LensMap>(&rep_)) {
            if (l->alpha <= 0 || l->alpha >= 2) throw std::invalid_argument("lens: need alpha in (0,2)");
        } else if (const auto* e = std::get_if<EllipseExteriorMap>(&rep_)) {
            if (std::abs(e->c) >= 1) throw std::invalid_argument("ellipse_exterior: need |c| < 1");
        }
    }

    void check_domain(Cpx z) const {
        const double tol = 1e-12;
        if (direction() == MapDirection::DiskToInterior) {
            if (std::abs(z) > 1.0 + tol)
                throw std::invalid_argument("conformal map: point outside the closed disk");
        } else {
            if (std::abs(z) < 1.0 - tol)
                throw std::invalid_argument("conformal map: point inside the unit circle");
        }
    }

    Rep rep_;
};

// ---------------------------------------------------------------------------
// Koebe distortion check
// ---------------------------------------------------------------------------

struct KoebeBoundsReport {
    bool pass = true;
    double worst_lower = std::numeric_limits<double>::infinity();  // min d / (0.25 (1-|z|^2)|f'|)
    double worst_upper = 0;                                        // max d / ((1-|z|^2)|f'|)
    Cpx worst_point;
};

/// Verifies 1/4 (1-|z|^2)|f'(z)| <= dist(f(z), boundary) <= (1-|z|^2)|f'(z)|.
/// The boundary distance is measured against a sampled image curve, except
/// for the Koebe map where the slit distance is exact.
inline KoebeBoundsReport koebe_bounds_check(const ConformalMap& map, const std::vector<Cpx>& points,
                                            std::size_t curve_samples = 4096, double rel_slack = 1e-3) {
    const bool is_koebe = std::holds_alternative<KoebeMap>(map.rep());
    std::optional<JordanCurve> curve;
    if (!is_koebe) curve.emplace(map.image_curve(curve_samples));

    KoebeBoundsReport rep;
    for (Cpx z : points) {
        if (std::abs(z) >= 1.0) throw std::invalid_argument("koebe_bounds_check: points must lie in the open disk");
        Cpx w = map.value(z);
        double df;
        if (is_koebe) {
            // distance to the slit (-inf, -1/4]
            df = w.real() >= -0.25 ? std::abs(w - Cpx(-0.25, 0.0)) : std::abs(w.imag());
        } else {
            df = distance_to_curve(w, *curve);
        }
        double scale = (1.0 - norm2(z)) * std::abs(map.derivative(z));
        double lower = df / (0.25 * scale);
        double upper = df / scale;
        if (lower < rep.worst_lower) {
            rep.worst_lower = lower;
            rep.worst_point = z;
        }
        rep.worst_upper = std::max(rep.worst_upper, upper);
        if (lower < 1.0 - rel_slack || upper > 1.0 + rel_slack) rep.pass = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

/// Pull-back through a disk->Omega map: atom (q, w) -> (phi^{-1}(q), w / |phi'|).
inline Measure pull_back(const Measure& m, const ConformalMap& map) {
    if (map.direction() != MapDirection::DiskToInterior)
        throw std::invalid_argument("pull_back: map must send the disk to the measure's domain");
    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (const Atom& a : m.atoms()) {
        Cpx z = map.inverse(a.pos);
        if (std::abs(z) >= 1.0)
            throw std::invalid_argument("pull_back: atom not in the map's image");
        atoms.push_back({z, a.weight / std::abs(map.derivative(z))});
    }
    auto disk = std::make_shared<JordanCurve>(generate_curve(CircleFamily{}, m.domain().size()));
    return Measure(std::move(atoms), std::move(disk), DomainSide::Interior);
}

/// Push-forward through a disk->Omega map: atom (p, w) -> (phi(p), w |phi'(p)|).
inline Measure push_forward(const Measure& m, const ConformalMap& map,
                            std::shared_ptr<const JordanCurve> target = nullptr) {
    if (map.direction() != MapDirection::DiskToInterior)
        throw std::invalid_argument("push_forward: map must be disk -> interior");
    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (const Atom& a : m.atoms()) {
        if (std::abs(a.pos) >= 1.0) throw std::invalid_argument("push_forward: atoms must lie in the open disk");
        atoms.push_back({map.value(a.pos), a.weight * std::abs(map.derivative(a.pos))});
    }
    if (!target) target = std::make_shared<JordanCurve>(map.image_curve(m.domain().size()));
    return Measure(std::move(atoms), std::move(target), DomainSide::Interior);
}

// ---------------------------------------------------------------------------
// Welding
// ---------------------------------------------------------------------------

struct WeldingResult {
    CircleHomeomorphism h;
    double residual = 0;  // max boundary-correspondence mismatch on the curve
    TheodorsenResult interior;
    TheodorsenResult exterior;
};

/// Welding homeomorphism of a star-like curve r = rho(t): the interior
/// correspondence composed with the inverse of the exterior one. The exterior
/// domain is reduced to the star-like interior problem for 1/rho through the
/// inversion w -> 1/conj(w). Both Riemann maps are normalized by f(0) = 0
/// (respectively f(inf) = inf) with positive derivative.
inline WeldingResult welding(const std::function<double(double)>& rho, std::size_t n,
                             double tol = 1e-12, int max_iter = 300) {
    auto interior = theodorsen_map(rho, n, tol, max_iter);
    auto exterior = theodorsen_map([&rho](double t) { return 1.0 / rho(t); }, n, tol, max_iter);
    if (!interior.converged || !exterior.converged)
        throw std::runtime_error("welding: theodorsen iteration did not converge");

    const auto& Ti = interior.map->Theta;
    const auto& Te = exterior.map->Theta;
    CircleHomeomorphism corr_i(Ti);
    std::vector<double> H(n);
    for (std::size_t j = 0; j < n; ++j) H[j] = corr_i.inverse_lift(Te[j]);

    double mismatch = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double psi1 = corr_i.lift(H[j]);
        double psi2 = Te[j];
        Cpx p1 = std::polar(rho(psi1), psi1), p2 = std::polar(rho(psi2), psi2);
        mismatch = std::max(mismatch, std::abs(p1 - p2));
    }
    return {CircleHomeomorphism(std::move(H)), mismatch, std::move(interior), std::move(exterior)};
}

inline WeldingResult welding(const JordanCurve& curve, double tol = 1e-12, int max_iter = 300) {
    return welding(radius_function(curve.family()), curve.size(), tol, max_iter);
}

}  // namespace cm
