#pragma once
// Finite measures as weighted atom lists, Carleson norms as grid suprema,
// vanishing profiles and collar restrictions.
//
// All reported norms are suprema over finite (center, radius) grids and are
// therefore certified lower bounds of the true quantities. Disk membership is
// open with a 1e-14 relative tie tolerance, so results are deterministic.

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <vector>

#include "cm/core.hpp"
#include "cm/geometry.hpp"

namespace cm {

enum class DomainSide { Interior, Exterior };

struct Atom {
    Cpx pos;
    double weight = 0;
};

class Measure {
public:
    Measure() = default;
    Measure(std::vector<Atom> atoms, std::shared_ptr<const JordanCurve> domain,
            DomainSide side = DomainSide::Interior, bool validate = false)
        : atoms_(std::move(atoms)), domain_(std::move(domain)), side_(side) {
        if (!domain_) throw std::invalid_argument("Measure: null domain");
        double total = 0;
        for (const Atom& a : atoms_) {
            if (!(a.weight >= 0)) throw std::invalid_argument("Measure: negative or NaN weight");
            total += a.weight;
        }
        if (!std::isfinite(total)) throw std::invalid_argument("Measure: infinite total mass");
        if (validate) {
            for (const Atom& a : atoms_) {
                PointLocation loc = locate_point(a.pos, *domain_);
                bool ok = side_ == DomainSide::Interior ? loc == PointLocation::Inside
                                                        : loc == PointLocation::Outside;
                if (!ok) throw std::invalid_argument("Measure: atom not strictly inside its domain");
            }
        }
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const JordanCurve& domain() const { return *domain_; }
    std::shared_ptr<const JordanCurve> domain_ptr() const { return domain_; }
    DomainSide side() const { return side_; }

    double total_mass() const {
        double t = 0;
        for (const Atom& a : atoms_) t += a.weight;
        return t;
    }

    bool same_domain(const Measure& other) const {
        if (domain_ == other.domain_) return side_ == other.side_;
        return side_ == other.side_ && domain_->samples() == other.domain_->samples();
    }

private:
    std::vector<Atom> atoms_;
    std::shared_ptr<const JordanCurve> domain_;
    DomainSide side_ = DomainSide::Interior;
};

struct CarlesonReport {
    double norm = 0;
    Cpx witness_center;
    double witness_radius = 0;
    std::size_t n_centers = 0;
    std::size_t n_radii = 0;
};

struct VanishingProfile {
    std::vector<std::pair<double, double>> entries;  // (radius, sup_z mass/r), radii decreasing
};

struct CarlesonGrid {
    std::vector<Cpx> centers;
    std::vector<double> radii;
};

/// Default grid: every (N/n_centers)-th curve sample as center, n_radii
/// log-spaced radii in [1e-3 * diam, diam].
inline CarlesonGrid default_grid(const JordanCurve& curve, std::size_t n_centers = 256,
                                 std::size_t n_radii = 64) {
    CarlesonGrid g;
    const std::size_t n = curve.size();
    std::size_t stride = std::max<std::size_t>(1, n / std::min(n_centers, n));
    for (std::size_t i = 0; i < n; i += stride) g.centers.push_back(curve.at(i));
    const double d = curve.diameter();
    g.radii.resize(n_radii);
    for (std::size_t k = 0; k < n_radii; ++k)
        g.radii[k] = d * std::pow(1e-3, 1.0 - static_cast<double>(k) / (n_radii - 1));
    return g;
}

/// Nested refinement: doubles the center count from the curve samples and
/// inserts geometric midpoints between consecutive radii. The refined grid
/// contains the original, so grid suprema are monotone under refinement.
inline CarlesonGrid refine_grid(const CarlesonGrid& g, const JordanCurve& curve) {
    CarlesonGrid r;
    const std::size_t n = curve.size();
    std::size_t stride = std::max<std::size_t>(1, n / std::min(2 * g.centers.size(), n));
    for (std::size_t i = 0; i < n; i += stride) r.centers.push_back(curve.at(i));
    r.radii.reserve(2 * g.radii.size());
    for (std::size_t k = 0; k < g.radii.size(); ++k) {
        r.radii.push_back(g.radii[k]);
        if (k + 1 < g.radii.size()) r.radii.push_back(std::sqrt(g.radii[k] * g.radii[k + 1]));
    }
    return r;
}

namespace detail {

/// Core sweep: for every center, atom masses accumulated into radius buckets.
/// Returns per-radius suprema over centers and the global witness.
struct SweepResult {
    std::vector<double> per_radius_sup;  // indexed like the sorted radii
    CarlesonReport report;
};

inline SweepResult carleson_sweep(const std::vector<Atom>& atoms, const std::vector<Cpx>& centers,
                                  std::vector<double> radii) {
    if (centers.empty() || radii.empty())
        throw std::invalid_argument("carleson_sweep: empty grid");
    std::sort(radii.begin(), radii.end());
    const std::size_t nr = radii.size();

    // The center loop is a max-reduction, parallelized over contiguous center
    // blocks and merged in block order: results never depend on worker count.
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CM_THREADS")) threads = std::max(1, std::atoi(env));
    std::size_t block = (centers.size() + threads - 1) / threads;
    std::size_t n_blocks = (centers.size() + block - 1) / block;
    std::vector<SweepResult> partial(n_blocks);

    auto sweep_block = [&](std::size_t b) {
        SweepResult out;
        out.per_radius_sup.assign(nr, 0.0);
        std::vector<double> bucket(nr + 1);
        for (std::size_t ci = b * block; ci < std::min(centers.size(), (b + 1) * block); ++ci) {
            const Cpx z = centers[ci];
            std::fill(bucket.begin(), bucket.end(), 0.0);
            for (const Atom& a : atoms) {
                double dist = std::abs(a.pos - z);
                // open disk with relative tie tolerance: inside iff dist < r*(1+tie)
                std::size_t idx = std::lower_bound(radii.begin(), radii.end(),
                                                   dist / (1.0 + kDiskTieRel)) -
                                  radii.begin();
                if (idx < nr && radii[idx] * (1.0 + kDiskTieRel) <= dist) ++idx;
                bucket[idx] += a.weight;
            }
            double mass = 0;
            for (std::size_t k = 0; k < nr; ++k) {
                mass += bucket[k];
                double ratio = mass / radii[k];
                if (ratio > out.per_radius_sup[k]) out.per_radius_sup[k] = ratio;
                if (ratio > out.report.norm) {
                    out.report.norm = ratio;
                    out.report.witness_center = z;
                    out.report.witness_radius = radii[k];
                }
            }
        }
        partial[b] = std::move(out);
    };

    if (n_blocks <= 1 || atoms.size() * centers.size() < (std::size_t(1) << 18)) {
        block = centers.size();
        n_blocks = 1;
        partial.resize(1);
        sweep_block(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t b = 0; b < n_blocks; ++b) pool.emplace_back(sweep_block, b);
        for (auto& t : pool) t.join();
    }

    SweepResult out = std::move(partial[0]);
    out.report.n_centers = centers.size();
    out.report.n_radii = nr;
    for (std::size_t b = 1; b < n_blocks; ++b) {
        for (std::size_t k = 0; k < nr; ++k)
            out.per_radius_sup[k] = std::max(out.per_radius_sup[k], partial[b].per_radius_sup[k]);
        if (partial[b].report.norm > out.report.norm) {
            out.report.norm = partial[b].report.norm;
            out.report.witness_center = partial[b].report.witness_center;
            out.report.witness_radius = partial[b].report.witness_radius;
        }
    }
    return out;
}

/// Per-atom distance to the domain boundary; analytic for the unit circle.
inline std::vector<double> atom_boundary_distances(const Measure& m) {
    const auto& atoms = m.atoms();
    std::vector<double> d(atoms.size());
    if (std::holds_alternative<CircleFamily>(m.domain().family())) {
        for (std::size_t i = 0; i < atoms.size(); ++i) d[i] = std::abs(1.0 - std::abs(atoms[i].pos));
    } else {
        for (std::size_t i = 0; i < atoms.size(); ++i) d[i] = distance_to_curve(atoms[i].pos, m.domain());
    }
    return d;
}

}  // namespace detail

inline void check_measure_grid(const Measure& m, const std::vector<double>& radii) {
    const double cap = m.domain().diameter() * (1.0 + 1e-9);
    for (double r : radii)
        if (r <= 0 || r > cap)
            throw std::invalid_argument("carleson grid: radii must lie in (0, diameter]");
}

inline CarlesonReport carleson_norm(const Measure& m, const std::vector<Cpx>& centers,
                                    const std::vector<double>& radii) {
    check_measure_grid(m, radii);
    return detail::carleson_sweep(m.atoms(), centers, radii).report;
}

inline CarlesonReport carleson_norm(const Measure& m, const CarlesonGrid& g) {
    return carleson_norm(m, g.centers, g.radii);
}

inline CarlesonReport carleson_norm(const Measure& m) {
    return carleson_norm(m, default_grid(m.domain()));
}

inline VanishingProfile vanishing_profile(const Measure& m, const std::vector<Cpx>& centers,
                                          const std::vector<double>& radii) {
    check_measure_grid(m, radii);
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    auto sweep = detail::carleson_sweep(m.atoms(), centers, sorted);
    VanishingProfile p;
    for (std::size_t k = sorted.size(); k > 0; --k)
        p.entries.emplace_back(sorted[k - 1], sweep.per_radius_sup[k - 1]);
    return p;
}

inline VanishingProfile vanishing_profile(const Measure& m, const CarlesonGrid& g) {
    return vanishing_profile(m, g.centers, g.radii);
}

/// Keeps exactly the atoms with boundary distance > r.
inline Measure restrict_to_collar(const Measure& m, double r) {
    if (r < 0) throw std::invalid_argument("restrict_to_collar: r must be >= 0");
    auto dist = detail::atom_boundary_distances(m);
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < m.atoms().size(); ++i)
        if (dist[i] > r) kept.push_back(m.atoms()[i]);
    return Measure(std::move(kept), m.domain_ptr(), m.side());
}

/// Per radius r: the Carleson norm of mu - mu_r (atoms within distance r of
/// the boundary). Radii must be given in decreasing order.
inline std::vector<std::pair<double, double>> collar_deficit(const Measure& m,
                                                             const std::vector<double>& radii,
                                                             const CarlesonGrid& grid) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]))
            throw std::invalid_argument("collar_deficit: radii must be strictly decreasing");
    auto dist = detail::atom_boundary_distances(m);
    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (double r : radii) {
        std::vector<Atom> boundary_part;
        for (std::size_t i = 0; i < m.atoms().size(); ++i)
            if (dist[i] <= r) boundary_part.push_back(m.atoms()[i]);
        if (boundary_part.empty()) {
            out.emplace_back(r, 0.0);
            continue;
        }
        out.emplace_back(r, detail::carleson_sweep(boundary_part, grid.centers, grid.radii).report.norm);
    }
    return out;
}

inline Measure scale(const Measure& m, double a) {
    if (!(a >= 0)) throw std::invalid_argument("scale: factor must be >= 0");
    std::vector<Atom> atoms = m.atoms();
    for (Atom& at : atoms) at.weight *= a;
    return Measure(std::move(atoms), m.domain_ptr(), m.side());
}

inline Measure add(const Measure& m1, const Measure& m2) {
    if (!m1.same_domain(m2)) throw std::invalid_argument("add: measures live on different domains");
    std::vector<Atom> atoms = m1.atoms();
    atoms.insert(atoms.end(), m2.atoms().begin(), m2.atoms().end());
    return Measure(std::move(atoms), m1.domain_ptr(), m1.side());
}

}  // namespace cm
