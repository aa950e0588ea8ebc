#include <catch2/catch_amalgamated.hpp>

#include "cm/measure.hpp"
#include "oracles.hpp"

using namespace cm;

namespace {

std::shared_ptr<const JordanCurve> disk_curve(std::size_t n = 256) {
    return std::make_shared<JordanCurve>(generate_curve(CircleFamily{}, n));
}

/// Cell-center discretization of the area measure on the unit disk.
Measure area_measure(std::shared_ptr<const JordanCurve> dom, std::size_t cells) {
    std::vector<Atom> atoms;
    const double h = 2.0 / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t j = 0; j < cells; ++j) {
            Cpx z(-1 + (i + 0.5) * h, -1 + (j + 0.5) * h);
            if (std::abs(z) < 1.0 - 1e-12) atoms.push_back({z, h * h});
        }
    }
    return Measure(std::move(atoms), std::move(dom));
}

/// Unit-density atoms along [0, 1) on the real axis.
Measure segment_measure(std::shared_ptr<const JordanCurve> dom, std::size_t k = 4096) {
    std::vector<Atom> atoms(k);
    for (std::size_t i = 0; i < k; ++i)
        atoms[i] = {Cpx((i + 0.5) / static_cast<double>(k), 0.0), 1.0 / static_cast<double>(k)};
    return Measure(std::move(atoms), std::move(dom));
}

Measure random_measure(std::shared_ptr<const JordanCurve> dom, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uw(0.0, 1.0);
    std::vector<Atom> atoms(count);
    for (auto& a : atoms) a = {random_in_disk(rng, 0.97), uw(rng)};
    return Measure(std::move(atoms), std::move(dom));
}

}  // namespace

TEST_CASE("carleson_norm: zero measure and single atoms") {
    auto dom = disk_curve();
    Measure zero({}, dom);
    auto g = default_grid(*dom);
    REQUIRE(carleson_norm(zero, g).norm == 0.0);

    // unit atom at the origin; the smallest boundary-centered disk containing
    // it has radius exactly 1 (tie counts as inside)
    Measure atom({{Cpx(0, 0), 1.0}}, dom);
    auto rep = carleson_norm(atom, g.centers, {0.25, 0.5, 1.0, 2.0});
    REQUIRE(rep.norm == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(rep.witness_radius == Catch::Approx(1.0));
}

TEST_CASE("carleson_norm: discretized area measure against the lens-area oracle") {
    auto [oracle_val, oracle_r] = oracle::lens_area_ratio_max();
    REQUIRE(oracle_val == Catch::Approx(1.6201).margin(5e-4));
    REQUIRE(oracle_r == Catch::Approx(1.80).margin(0.02));

    auto dom = disk_curve(256);
    auto m = area_measure(dom, 256);
    auto rep = carleson_norm(m, default_grid(*dom, 128, 64));
    REQUIRE(rep.norm > 1.55);
    REQUIRE(rep.norm < 1.65);
    REQUIRE(rep.witness_radius == Catch::Approx(oracle_r).margin(0.15));
}

TEST_CASE("carleson grid preconditions") {
    auto dom = disk_curve();
    Measure atom({{Cpx(0, 0), 1.0}}, dom);
    REQUIRE_THROWS_AS(carleson_norm(atom, {Cpx(1, 0)}, {3.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(carleson_norm(atom, {Cpx(1, 0)}, {0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(carleson_norm(atom, {}, {1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(Measure({{Cpx(0, 0), -1.0}}, dom), std::invalid_argument);
    // domain validation catches atoms outside
    REQUIRE_THROWS_AS(Measure({{Cpx(2, 0), 1.0}}, dom, DomainSide::Interior, true),
                      std::invalid_argument);
}

TEST_CASE("vanishing_profile: compactly supported and segment measures") {
    auto dom = disk_curve(512);
    Rng rng(7);
    std::vector<Atom> atoms(200);
    for (auto& a : atoms) a = {random_in_disk(rng, 0.5), 1.0};
    Measure compact(std::move(atoms), dom);
    auto g = default_grid(*dom, 256, 48);
    std::vector<double> small_radii;
    for (double r : g.radii)
        if (r < 0.5) small_radii.push_back(r);
    auto prof = vanishing_profile(compact, g.centers, small_radii);
    for (auto [r, v] : prof.entries) {
        REQUIRE(r < 0.5);
        REQUIRE(v == 0.0);
    }

    auto seg = segment_measure(dom);
    std::vector<double> radii;
    for (int k = 0; k < 24; ++k) radii.push_back(0.01 * std::pow(100.0, k / 23.0));
    auto sprof = vanishing_profile(seg, g.centers, radii);
    REQUIRE(sprof.entries.front().first > sprof.entries.back().first);  // decreasing radii
    for (auto [r, v] : sprof.entries) REQUIRE(v == Catch::Approx(1.0).margin(0.1));
}

TEST_CASE("restrict_to_collar keeps exactly the atoms beyond distance r") {
    auto dom = disk_curve();
    auto seg = segment_measure(dom, 1024);
    REQUIRE(restrict_to_collar(seg, 0.0).atoms().size() == seg.atoms().size());
    REQUIRE(restrict_to_collar(seg, 2.0).atoms().empty());

    auto kept = restrict_to_collar(seg, 0.25);
    for (const Atom& a : kept.atoms()) REQUIRE(a.pos.real() < 0.75);
    std::size_t expect = 0;
    for (const Atom& a : seg.atoms())
        if (1.0 - a.pos.real() > 0.25) ++expect;
    REQUIRE(kept.atoms().size() == expect);
}

TEST_CASE("collar_deficit: compact support vanishes, segment persists") {
    auto dom = disk_curve(512);
    auto g = default_grid(*dom, 256, 48);

    Rng rng(11);
    std::vector<Atom> atoms(100);
    for (auto& a : atoms) a = {random_in_disk(rng, 0.4), 1.0};
    Measure compact(std::move(atoms), dom);
    auto d1 = collar_deficit(compact, {0.3, 0.2, 0.1}, g);
    for (auto [r, v] : d1) REQUIRE(v == 0.0);

    auto seg = segment_measure(dom);
    auto d2 = collar_deficit(seg, {0.1, 0.05, 0.02, 0.01}, g);
    for (auto [r, v] : d2) REQUIRE(v >= 0.9);

    REQUIRE_THROWS_AS(collar_deficit(seg, {0.01, 0.1}, g), std::invalid_argument);
}

TEST_CASE("homogeneity is exact on a fixed grid") {
    auto dom = disk_curve();
    auto g = default_grid(*dom, 128, 32);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto m = random_measure(dom, 300, seed);
        double base = carleson_norm(m, g).norm;
        REQUIRE(carleson_norm(scale(m, 2.0), g).norm == 2.0 * base);
        REQUIRE(carleson_norm(scale(m, 0.0), g).norm == 0.0);
        double a = 0.1 + 3.0 * (seed / 4.0);
        REQUIRE(carleson_norm(scale(m, a), g).norm ==
                Catch::Approx(a * base).epsilon(1e-12));
    }
}

TEST_CASE("subadditivity and restriction monotonicity (randomized)") {
    auto dom = disk_curve();
    auto g = default_grid(*dom, 128, 32);
    Rng seeds(99);
    for (int cse = 0; cse < 50; ++cse) {
        auto m1 = random_measure(dom, 200, seeds());
        auto m2 = random_measure(dom, 150, seeds());
        double n1 = carleson_norm(m1, g).norm;
        double n2 = carleson_norm(m2, g).norm;
        double ns = carleson_norm(add(m1, m2), g).norm;
        REQUIRE(ns <= n1 + n2 + 1e-12);

        std::uniform_real_distribution<double> ur(0.0, 0.5);
        Rng rr(seeds());
        double r = ur(rr);
        REQUIRE(carleson_norm(restrict_to_collar(m1, r), g).norm <= n1 + 1e-15);
    }
    REQUIRE_THROWS_AS(add(random_measure(dom, 10, 1), random_measure(disk_curve(128), 10, 1)),
                      std::invalid_argument);
    auto m = random_measure(dom, 10, 1);
    REQUIRE(carleson_norm(add(m, Measure({}, dom)), g).norm == carleson_norm(m, g).norm);
}

TEST_CASE("sweep results are independent of the worker count") {
    auto dom = disk_curve(512);
    auto m = random_measure(dom, 2100, 64);  // large enough to engage the parallel path
    auto g = default_grid(*dom, 256, 48);
    setenv("CM_THREADS", "1", 1);
    auto r1 = carleson_norm(m, g);
    auto p1 = vanishing_profile(m, g);
    setenv("CM_THREADS", "3", 1);
    auto r3 = carleson_norm(m, g);
    auto p3 = vanishing_profile(m, g);
    unsetenv("CM_THREADS");
    REQUIRE(r1.norm == r3.norm);
    REQUIRE(r1.witness_radius == r3.witness_radius);
    REQUIRE(std::abs(r1.witness_center - r3.witness_center) == 0.0);
    REQUIRE(p1.entries == p3.entries);
}

TEST_CASE("grid refinement never decreases the reported norm") {
    auto dom = disk_curve(512);
    auto m = random_measure(dom, 400, 42);
    auto g = default_grid(*dom, 64, 16);
    double v1 = carleson_norm(m, g).norm;
    auto g2 = refine_grid(g, *dom);
    REQUIRE(g2.centers.size() >= 2 * g.centers.size() - 1);
    REQUIRE(g2.radii.size() == 2 * g.radii.size() - 1);
    double v2 = carleson_norm(m, g2).norm;
    REQUIRE(v2 >= v1 - 1e-12);
}
