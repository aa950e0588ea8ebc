#pragma once
// Quasiconformal machinery: Douady-Earle barycentric extension of circle
// homeomorphisms, polar-grid quasiconformal maps, Beltrami fields and the
// composition formula, Poincare bi-Lipschitz certification, and the Carleson
// measures induced by dilatations.

#include <functional>
#include <optional>
#include <vector>

#include "cm/circle.hpp"
#include "cm/core.hpp"
#include "cm/geometry.hpp"
#include "cm/measure.hpp"

namespace cm {

// ---------------------------------------------------------------------------
// Polar grids
// ---------------------------------------------------------------------------

struct PolarGrid {
    std::vector<double> radii;  // ascending, all < 1
    std::size_t n_theta = 0;

    /// Sine-clustered radii accumulating toward |z| = 1; the outermost ring
    /// stays a few grid widths short of the boundary so that the quadrature
    /// cost of the barycenter solves stays bounded.
    static PolarGrid clustered(std::size_t n_r = 128, std::size_t n_theta = 512) {
        PolarGrid g;
        g.n_theta = n_theta;
        std::size_t margin = std::max<std::size_t>(4, n_r / 16);
        g.radii.resize(n_r);
        for (std::size_t i = 0; i < n_r; ++i)
            g.radii[i] = std::sin(kPi * static_cast<double>(i + 1) /
                                  (2.0 * static_cast<double>(n_r + margin)));
        return g;
    }

    double theta(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(n_theta); }
    Cpx node_point(std::size_t i, std::size_t j) const { return std::polar(radii[i], theta(j)); }
};

// ---------------------------------------------------------------------------
// Douady-Earle extension
// ---------------------------------------------------------------------------

struct DEOptions {
    double newton_tol = 1e-11;
    int max_newton = 60;
    double quad_factor = 16.0;      // quadrature nodes >= quad_factor / (1 - |w|)
    std::size_t min_nodes = 768;
    std::size_t max_nodes = 1u << 17;
};

struct DESolve {
    Cpx value;
    double residual = 0;
    int iterations = 0;
};

/// Conformal barycenter solver: at w the value zeta kills the harmonic-measure
/// average of the Moebius-transported boundary image. The average is taken in
/// the parametrization xi = (e^{it} + w)/(1 + conj(w) e^{it}), which carries
/// the Poisson concentration and keeps Moebius naturality exact under the
/// uniform trapezoid sum.
class DouadyEarleExtension {
public:
    explicit DouadyEarleExtension(CircleHomeomorphism h, DEOptions opt = {})
        : h_(std::move(h)), opt_(opt) {}

    const CircleHomeomorphism& boundary() const { return h_; }
    const DEOptions& options() const { return opt_; }

    DESolve solve(Cpx w, std::optional<Cpx> seed = std::nullopt) const {
        if (std::abs(w) >= 1.0)
            throw std::invalid_argument("douady_earle: interior points only");
        const std::size_t n = node_count(std::abs(w));
        std::vector<Cpx> u(n);
        for (std::size_t j = 0; j < n; ++j) {
            Cpx e = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
            Cpx xi = (e + w) / (1.0 + std::conj(w) * e);
            u[j] = std::polar(1.0, h_.lift(std::atan2(xi.imag(), xi.real())));
        }
        Cpx z = seed.value_or(mean(u));
        if (std::abs(z) > 0.999) z *= 0.999 / std::abs(z);

        auto Fval = [&](Cpx zeta) {
            Cpx acc(0);
            for (const Cpx& uu : u) acc += (uu - zeta) / (1.0 - std::conj(zeta) * uu);
            return acc / static_cast<double>(n);
        };
        Cpx F = Fval(z);
        int it = 0;
        for (; it < opt_.max_newton && std::abs(F) >= opt_.newton_tol; ++it) {
            Cpx A(0), B(0);
            for (const Cpx& uu : u) {
                Cpx d = 1.0 - std::conj(z) * uu;
                A -= 1.0 / d;
                B += uu * (uu - z) / (d * d);
            }
            A /= static_cast<double>(n);
            B /= static_cast<double>(n);
            double den = norm2(A) - norm2(B);
            if (std::abs(den) < 1e-300) break;
            Cpx step = (std::conj(F) * B - F * std::conj(A)) / den;
            double lam = 1.0;
            Cpx zn = z + step;
            Cpx Fn = std::abs(zn) < 1.0 ? Fval(zn) : F;
            int guard = 0;
            while ((std::abs(zn) >= 1.0 || std::abs(Fn) > std::abs(F)) && guard++ < 40) {
                lam *= 0.5;  // damp on residual increase
                zn = z + lam * step;
                if (std::abs(zn) < 1.0) Fn = Fval(zn);
            }
            z = zn;
            F = Fn;
        }
        return {z, std::abs(F), it};
    }

    Cpx evaluate(Cpx w) const {
        auto s = solve(w);
        if (s.residual > 1e3 * opt_.newton_tol)
            throw NewtonError("douady_earle: barycenter Newton did not converge", {s.value});
        return s.value;
    }

private:
    std::size_t node_count(double r) const {
        double want = opt_.quad_factor / std::max(1e-12, 1.0 - r);
        double clamped = std::min(static_cast<double>(opt_.max_nodes),
                                  std::max(static_cast<double>(opt_.min_nodes), want));
        return static_cast<std::size_t>(std::ceil(clamped / 8.0)) * 8;
    }
    static Cpx mean(const std::vector<Cpx>& u) {
        Cpx acc(0);
        for (const Cpx& v : u) acc += v;
        return acc / static_cast<double>(u.size());
    }

    CircleHomeomorphism h_;
    DEOptions opt_;
};

// ---------------------------------------------------------------------------
// QCGridMap
// ---------------------------------------------------------------------------

/// Orientation-preserving self-map of the disk held on a polar grid, with the
/// exact boundary trace stored as the r = 1 ring.
class QCGridMap {
public:
    struct Wirtinger {
        Cpx dz, dzbar;
    };

    static QCGridMap douady_earle(const CircleHomeomorphism& h, const PolarGrid& grid,
                                  DEOptions opt = {}) {
        DouadyEarleExtension ext(h, opt);
        QCGridMap m(grid);
        m.boundary_ = h;
        const std::size_t nr = grid.radii.size(), nt = grid.n_theta;
        // continuation runs outward along each ray; rays are independent, so
        // the solve parallelizes across rays with per-ray residual maxima
        std::vector<double> ray_residual(nt, 0.0);
        parallel_for(nt, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                std::optional<Cpx> seed;
                for (std::size_t i = 0; i < nr; ++i) {
                    auto s = ext.solve(grid.node_point(i, j), seed);
                    m.values_[i * nt + j] = s.value;
                    ray_residual[j] = std::max(ray_residual[j], s.residual);
                    seed = s.value;
                }
            }
        });
        for (double r : ray_residual) m.worst_residual_ = std::max(m.worst_residual_, r);
        for (std::size_t j = 0; j < nt; ++j)
            m.values_[nr * nt + j] = std::polar(1.0, h.lift(grid.theta(j)));
        m.finalize();
        return m;
    }

    /// Grid map holding exact values of an explicit test map (linear, Moebius);
    /// the boundary ring stores f on |z| = 1.
    static QCGridMap from_function(const std::function<Cpx(Cpx)>& f, const PolarGrid& grid,
                                   std::optional<CircleHomeomorphism> trace = std::nullopt) {
        QCGridMap m(grid);
        m.boundary_ = std::move(trace);
        const std::size_t nr = grid.radii.size(), nt = grid.n_theta;
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nt; ++j) m.values_[i * nt + j] = f(grid.node_point(i, j));
        for (std::size_t j = 0; j < nt; ++j)
            m.values_[nr * nt + j] = f(std::polar(1.0, grid.theta(j)));
        m.finalize();
        return m;
    }

    const PolarGrid& grid() const { return grid_; }
    bool has_boundary_trace() const { return boundary_.has_value(); }
    const CircleHomeomorphism& boundary_trace() const {
        if (!boundary_) throw std::logic_error("QCGridMap: no boundary trace recorded");
        return *boundary_;
    }
    double worst_residual() const { return worst_residual_; }
    bool orientation_preserving() const { return orientation_ok_; }

    /// Node value; i == radii.size() addresses the boundary ring.
    Cpx node(std::size_t i, std::size_t j) const {
        return values_[i * grid_.n_theta + (j % grid_.n_theta)];
    }

    /// Value anywhere in the closed disk: exact at nodes, bilinear in (r, t)
    /// between them, the stored boundary ring on |w| = 1.
    Cpx value(Cpx w) const {
        double r = std::abs(w);
        if (r > 1.0 + 1e-12) throw std::invalid_argument("QCGridMap::value: |w| > 1");
        double t = wrap_angle(std::atan2(w.imag(), w.real()));
        return interp(values_, std::min(r, 1.0), t);
    }

    /// Wirtinger derivatives at an interior node: centered differences in grid
    /// coordinates (the innermost ring borrows the antipodal ray to stay
    /// centered; the outermost interior ring uses the boundary ring above it).
    Wirtinger derivatives_at(std::size_t i, std::size_t j) const {
        const std::size_t nt = grid_.n_theta;
        const double r = grid_.radii[i], th = grid_.theta(j);
        double r_lo = i == 0 ? -grid_.radii[0] : grid_.radii[i - 1];
        double r_hi = i + 1 < grid_.radii.size() ? grid_.radii[i + 1] : 1.0;
        Cpx f_lo = i == 0 ? node(0, j + nt / 2) : node(i - 1, j);
        Cpx f_hi = node(i + 1, j);
        Cpx f0 = node(i, j);
        // 3-point Lagrange derivative on the nonuniform radial stencil
        double h1 = r - r_lo, h2 = r_hi - r;
        Cpx fr = (f_hi * h1 * h1 - f_lo * h2 * h2 + f0 * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h1 + h2));
        Cpx ft = (node(i, j + 1) - node(i, j + nt - 1)) / (2.0 * kTwoPi / static_cast<double>(nt));
        double c = std::cos(th), s = std::sin(th);
        Cpx fx = c * fr - s / r * ft;
        Cpx fy = s * fr + c / r * ft;
        return {0.5 * (fx - Cpx(0, 1) * fy), 0.5 * (fx + Cpx(0, 1) * fy)};
    }

    Wirtinger derivatives_interp(Cpx w) const {
        ensure_derivative_cache();
        double r = std::abs(w);
        if (r >= grid_.radii.back()) r = grid_.radii.back() * (1 - 1e-12);
        double t = wrap_angle(std::atan2(w.imag(), w.real()));
        return {interp(dz_cache_, r, t), interp(dzbar_cache_, r, t)};
    }

private:
    explicit QCGridMap(PolarGrid grid)
        : grid_(std::move(grid)), values_((grid_.radii.size() + 1) * grid_.n_theta) {}

    void finalize() {
        orientation_ok_ = true;
        for (std::size_t i = 0; i < grid_.radii.size() && orientation_ok_; ++i)
            for (std::size_t j = 0; j < grid_.n_theta; ++j) {
                auto d = derivatives_at(i, j);
                if (norm2(d.dz) - norm2(d.dzbar) <= 0) {
                    orientation_ok_ = false;
                    break;
                }
            }
    }

    void ensure_derivative_cache() const {
        if (!dz_cache_.empty()) return;
        const std::size_t nr = grid_.radii.size(), nt = grid_.n_theta;
        dz_cache_.resize(nr * nt);
        dzbar_cache_.resize(nr * nt);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                auto d = derivatives_at(i, j);
                dz_cache_[i * nt + j] = d.dz;
                dzbar_cache_[i * nt + j] = d.dzbar;
            }
    }

    Cpx interp(const std::vector<Cpx>& table, double r, double t) const {
        const std::size_t nt = grid_.n_theta;
        const auto& rr = grid_.radii;
        const std::size_t max_row = table.size() / nt - 1;
        double x = t / kTwoPi * static_cast<double>(nt);
        std::size_t j = std::min(static_cast<std::size_t>(x), nt - 1);
        double ut = x - static_cast<double>(j);

        std::size_t i_hi = std::lower_bound(rr.begin(), rr.end(), r) - rr.begin();
        auto row = [&](std::size_t i, std::size_t jj) { return table[i * nt + (jj % nt)]; };
        if (i_hi == 0) {
            // innermost cell: interpolate radially between the antipodal ray
            // value at -r_0 and the ray value at +r_0
            double ur = (r + rr[0]) / (2 * rr[0]);
            Cpx lo = (1 - ut) * row(0, j + nt / 2) + ut * row(0, j + nt / 2 + 1);
            Cpx lo_flip = (1 - ut) * row(0, j) + ut * row(0, j + 1);
            // value on the antipodal ray corresponds to angle t + pi at radius r0
            return (1 - ur) * lo + ur * lo_flip;
        }
        std::size_t i_cap = std::min(i_hi, max_row);
        std::size_t i_lo = i_cap - 1;
        double r_lo = rr[i_lo], r_hi = i_cap < rr.size() ? rr[i_cap] : 1.0;
        double ur = std::clamp((r - r_lo) / (r_hi - r_lo), 0.0, 1.0);
        Cpx lo = (1 - ut) * row(i_lo, j) + ut * row(i_lo, j + 1);
        Cpx hi = (1 - ut) * row(i_cap, j) + ut * row(i_cap, j + 1);
        return (1 - ur) * lo + ur * hi;
    }

    PolarGrid grid_;
    std::optional<CircleHomeomorphism> boundary_;
    std::vector<Cpx> values_;
    double worst_residual_ = 0;
    bool orientation_ok_ = true;
    mutable std::vector<Cpx> dz_cache_, dzbar_cache_;
};

// ---------------------------------------------------------------------------
// Beltrami fields
// ---------------------------------------------------------------------------

struct BeltramiField {
    PolarGrid grid;
    std::vector<Cpx> mu;  // grid.radii.size() x grid.n_theta, row-major
    double sup_abs = 0;
    bool quasiconformal = true;  // sup |mu| < 1

    Cpx at(std::size_t i, std::size_t j) const { return mu[i * grid.n_theta + (j % grid.n_theta)]; }

    /// Constant field on radii graded geometrically toward |z| = 1, so the
    /// induced density 1/(1-|z|^2) stays resolved down to the cutoff 1-r_max.
    static BeltramiField constant(Cpx value, std::size_t n_r, std::size_t n_theta, double r_max) {
        if (std::abs(value) >= 1) throw std::invalid_argument("BeltramiField: need |mu| < 1");
        if (!(r_max > 0 && r_max < 1)) throw std::invalid_argument("BeltramiField: need 0 < r_max < 1");
        BeltramiField f;
        f.grid.n_theta = n_theta;
        f.grid.radii.resize(n_r);
        const double cutoff = 1.0 - r_max;
        for (std::size_t i = 0; i < n_r; ++i)
            f.grid.radii[i] =
                1.0 - std::pow(cutoff, static_cast<double>(i + 1) / static_cast<double>(n_r));
        f.mu.assign(n_r * n_theta, value);
        f.sup_abs = std::abs(value);
        return f;
    }
};

/// mu = (dbar f) / (d f) by centered differences on the map's grid.
inline BeltramiField beltrami_of(const QCGridMap& map) {
    if (!map.orientation_preserving())
        throw std::invalid_argument("beltrami_of: map is not orientation-preserving");
    BeltramiField f;
    f.grid = map.grid();
    const std::size_t nr = f.grid.radii.size(), nt = f.grid.n_theta;
    f.mu.resize(nr * nt);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            auto d = map.derivatives_at(i, j);
            Cpx m = d.dzbar / d.dz;
            f.mu[i * nt + j] = m;
            f.sup_abs = std::max(f.sup_abs, std::abs(m));
        }
    f.quasiconformal = f.sup_abs < 1.0;
    return f;
}

/// Dilatation of a composition: (mu + nu tau) / (1 + conj(mu) nu tau).
inline Cpx beltrami_compose(Cpx mu_f, Cpx nu_at_image, Cpx tau) {
    return (mu_f + nu_at_image * tau) / (1.0 + std::conj(mu_f) * nu_at_image * tau);
}

/// Poincare distance on the disk (metric |dz| / (1 - |z|^2)).
inline double poincare_distance(Cpx a, Cpx b) {
    double t = std::abs((a - b) / (1.0 - std::conj(a) * b));
    return std::atanh(std::min(t, 1.0 - 1e-16));
}

/// Bi-Lipschitz constant of the map under the Poincare metric over the given
/// point pairs: max of ratio and 1/ratio. Grid lower bound of the true value.
inline double poincare_bilipschitz(const QCGridMap& map, const std::vector<std::pair<Cpx, Cpx>>& pairs) {
    double C = 1.0;
    for (const auto& [p, q] : pairs) {
        if (std::abs(p) > 0.99 || std::abs(q) > 0.99)
            throw std::invalid_argument("poincare_bilipschitz: pairs must lie in |z| <= 0.99");
        double d0 = poincare_distance(p, q);
        if (d0 < 1e-14) continue;
        Cpx fp = map.value(p), fq = map.value(q);
        if (std::abs(fp) >= 1.0 || std::abs(fq) >= 1.0)
            throw std::invalid_argument("poincare_bilipschitz: image points escaped the disk");
        double ratio = poincare_distance(fp, fq) / d0;
        C = std::max({C, ratio, 1.0 / ratio});
    }
    return C;
}

/// Carleson measure induced by the dilatation: cell-center atoms with weight
/// |mu|^2 / (1 - |z|^2) * cell area. Cells beyond the field's outermost ring
/// (in particular anything touching |z| = 1) are excluded by construction.
inline Measure beltrami_carleson(const BeltramiField& field,
                                 std::shared_ptr<const JordanCurve> disk = nullptr) {
    const std::size_t nr = field.grid.radii.size(), nt = field.grid.n_theta;
    if (nr < 2) throw std::invalid_argument("beltrami_carleson: need at least two radii");
    if (!disk) disk = std::make_shared<JordanCurve>(generate_curve(CircleFamily{}, 256));
    std::vector<Atom> atoms;
    atoms.reserve((nr - 1) * nt);
    const double dth = kTwoPi / static_cast<double>(nt);
    for (std::size_t i = 0; i + 1 < nr; ++i) {
        double r0 = field.grid.radii[i], r1 = field.grid.radii[i + 1];
        double rc = 0.5 * (r0 + r1);
        double area = 0.5 * (r1 * r1 - r0 * r0) * dth;
        for (std::size_t j = 0; j < nt; ++j) {
            Cpx mc = 0.25 * (field.at(i, j) + field.at(i, j + 1) + field.at(i + 1, j) +
                             field.at(i + 1, j + 1));
            Cpx zc = std::polar(rc, field.grid.theta(j) + 0.5 * dth);
            double w = norm2(mc) / (1.0 - norm2(zc)) * area;
            if (w > 0) atoms.push_back({zc, w});
        }
    }
    return Measure(std::move(atoms), std::move(disk));
}

/// Push-forward of a measure on the disk through a quasiconformal grid map:
/// atom (p, w) -> (phi(p), w |d phi(p)|), the atom form of the transported
/// density lambda(phi^{-1}) |d phi^{-1}|.
inline Measure qc_push_forward(const Measure& m, const QCGridMap& map) {
    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (const Atom& a : m.atoms()) {
        if (std::abs(a.pos) >= 1.0)
            throw std::invalid_argument("qc_push_forward: atoms must lie in the open disk");
        auto d = map.derivatives_interp(a.pos);
        atoms.push_back({map.value(a.pos), a.weight * std::abs(d.dz)});
    }
    return Measure(std::move(atoms), m.domain_ptr(), m.side());
}

/// Boundary angle lift of a disk automorphism (for building exact traces).
inline std::function<double(double)> mobius_boundary_lift(Cpx a, double rot) {
    return [a, rot](double t) {
        Cpx d = 1.0 + std::conj(a) * std::polar(1.0, t);
        return rot + t - 2.0 * std::atan2(d.imag(), d.real());
    };
}

}  // namespace cm
