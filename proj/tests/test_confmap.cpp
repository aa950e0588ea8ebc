#include <catch2/catch_amalgamated.hpp>

#include "cm/confmap.hpp"
#include "oracles.hpp"

using namespace cm;

namespace {
std::shared_ptr<const JordanCurve> disk_curve(std::size_t n = 256) {
    return std::make_shared<JordanCurve>(generate_curve(CircleFamily{}, n));
}

std::vector<ConformalMap> analytic_test_maps() {
    return {ConformalMap(MobiusMap{Cpx(0.37, 0.21), 0.8}), ConformalMap(PolyMap{0.3}),
            ConformalMap(LensMap{1.3}), ConformalMap(LensMap{0.7})};
}
}  // namespace

TEST_CASE("evaluate/derivative: analytic families exact") {
    ConformalMap id = ConformalMap::identity();
    for (Cpx z : {Cpx(0.1, 0.2), Cpx(-0.7, 0.3), Cpx(0, 0)}) REQUIRE(std::abs(id.value(z) - z) == 0.0);

    ConformalMap p(PolyMap{0.3});
    REQUIRE(std::abs(p.value(Cpx(0, 0))) == 0.0);
    REQUIRE(std::abs(p.derivative(Cpx(0, 0)) - 1.0) == 0.0);

    ConformalMap m(MobiusMap{Cpx(0.5, 0), 0});
    REQUIRE(std::abs(m.derivative(Cpx(-0.5, 0)) - Cpx(4.0 / 3.0, 0)) < 1e-14);

    REQUIRE_THROWS_AS(p.value(Cpx(1.5, 0)), std::invalid_argument);
    REQUIRE_THROWS_AS(ConformalMap(EllipseExteriorMap{0.2}).value(Cpx(0.5, 0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(ConformalMap(MobiusMap{Cpx(1.2, 0), 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(ConformalMap(PolyMap{0.5}), std::invalid_argument);
}

TEST_CASE("inverse composes to the identity on a test grid") {
    auto maps = analytic_test_maps();
    maps.push_back(ConformalMap(KoebeMap{}));
    for (const auto& map : maps) {
        for (int i = 0; i < 12; ++i) {
            for (int j = 1; j < 9; ++j) {
                Cpx z = std::polar(j / 10.0, kTwoPi * i / 12.0);
                Cpx w = map.value(z);
                REQUIRE(std::abs(map.inverse(w) - z) < 1e-10);
            }
        }
    }
    ConformalMap ee(EllipseExteriorMap{0.2});
    for (int i = 0; i < 12; ++i) {
        Cpx z = std::polar(1.6, kTwoPi * i / 12.0);
        REQUIRE(std::abs(ee.inverse(ee.value(z)) - z) < 1e-10);
    }
}

TEST_CASE("derivative consistency: analytic vs centered differences") {
    auto maps = analytic_test_maps();
    for (const auto& map : maps) {
        for (int i = 0; i < 10; ++i) {
            Cpx z = std::polar(0.05 + 0.08 * i, 0.7 * i);
            double s = 1e-5;
            Cpx fd = (map.value(z + s) - map.value(z - s)) / (2 * s);
            REQUIRE(std::abs(fd - map.derivative(z)) / std::abs(map.derivative(z)) < 1e-6);
        }
    }
}

TEST_CASE("higher derivatives match stencil oracles") {
    auto maps = analytic_test_maps();
    for (const auto& map : maps) {
        auto f = [&](Cpx z) { return map.value(z); };
        for (Cpx z : {Cpx(0.2, 0.1), Cpx(-0.3, 0.25), Cpx(0.05, -0.4)}) {
            auto d = map.derivatives3(z);
            double s = 3e-3;
            REQUIRE(std::abs(oracle::stencil_d1(f, z, s) - d.f1) < 1e-7 * (1 + std::abs(d.f1)));
            REQUIRE(std::abs(oracle::stencil_d2(f, z, s) - d.f2) < 1e-5 * (1 + std::abs(d.f2)));
            REQUIRE(std::abs(oracle::stencil_d3(f, z, s) - d.f3) < 1e-3 * (1 + std::abs(d.f3)));
        }
    }
}

TEST_CASE("koebe_bounds_check") {
    ConformalMap id = ConformalMap::identity();
    auto rep0 = koebe_bounds_check(id, {Cpx(0, 0)});
    REQUIRE(rep0.pass);

    // koebe map at 0: lower bound attained with equality, d_f(0) = 1/4
    ConformalMap k(KoebeMap{});
    auto repk = koebe_bounds_check(k, {Cpx(0, 0)}, 4096, 1e-9);
    REQUIRE(repk.pass);
    REQUIRE(repk.worst_lower == Catch::Approx(1.0).epsilon(1e-12));

    ConformalMap p(PolyMap{0.3});
    Rng rng(5);
    std::vector<Cpx> pts(100);
    for (auto& z : pts) z = random_in_disk(rng, 0.9);
    REQUIRE(koebe_bounds_check(p, pts).pass);
}

TEST_CASE("pull_back: identity and mobius atom examples") {
    auto dom = disk_curve();
    Measure m({{Cpx(0.3, 0.1), 2.0}, {Cpx(-0.2, -0.4), 1.0}}, dom);
    auto pulled_id = pull_back(m, ConformalMap::identity());
    for (std::size_t i = 0; i < m.atoms().size(); ++i) {
        REQUIRE(std::abs(pulled_id.atoms()[i].pos - m.atoms()[i].pos) == 0.0);
        REQUIRE(pulled_id.atoms()[i].weight == m.atoms()[i].weight);
    }

    Measure atom({{Cpx(0, 0), 1.0}}, dom);
    auto pulled = pull_back(atom, ConformalMap(MobiusMap{Cpx(0.5, 0), 0}));
    REQUIRE(std::abs(pulled.atoms()[0].pos - Cpx(-0.5, 0)) < 1e-12);
    REQUIRE(pulled.atoms()[0].weight == Catch::Approx(0.75).epsilon(1e-12));
    auto rep = carleson_norm(pulled, default_grid(pulled.domain()).centers, {0.5, 0.75, 1.0, 2.0});
    REQUIRE(rep.norm == Catch::Approx(1.5).epsilon(1e-12));

    auto pulled_poly = pull_back(atom, ConformalMap(PolyMap{0.3}));
    REQUIRE(std::abs(pulled_poly.atoms()[0].pos) < 1e-14);
    REQUIRE(pulled_poly.atoms()[0].weight == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("push_forward: mobius atom example and round trip") {
    auto dom = disk_curve();
    Measure atom({{Cpx(-0.5, 0), 1.0}}, dom);
    auto pushed = push_forward(atom, ConformalMap(MobiusMap{Cpx(0.5, 0), 0}));
    REQUIRE(std::abs(pushed.atoms()[0].pos) < 1e-14);
    REQUIRE(pushed.atoms()[0].weight == Catch::Approx(4.0 / 3.0).epsilon(1e-12));

    // push_forward(pull_back(m)) == m atomwise
    for (const auto& map : analytic_test_maps()) {
        Rng rng(31);
        std::vector<Atom> atoms(500);
        for (auto& a : atoms) a = {map.value(random_in_disk(rng, 0.85)), 0.5 + std::abs(random_in_disk(rng, 0.5))};
        auto target = std::make_shared<JordanCurve>(map.image_curve(256));
        Measure mm(std::move(atoms), target);
        auto rt = push_forward(pull_back(mm, map), map, target);
        for (std::size_t i = 0; i < mm.atoms().size(); ++i) {
            REQUIRE(std::abs(rt.atoms()[i].pos - mm.atoms()[i].pos) < 1e-10);
            REQUIRE(std::abs(rt.atoms()[i].weight - mm.atoms()[i].weight) < 1e-10);
        }
    }
}

TEST_CASE("mobius quasi-invariance of Carleson norms on the disk") {
    auto dom = disk_curve(512);
    auto g1 = default_grid(*dom, 128, 48);
    auto g2 = refine_grid(g1, *dom);
    Rng rng(71);
    std::uniform_real_distribution<double> uw(0.1, 1.0);
    for (Cpx a : {Cpx(0.4, 0.0), Cpx(-0.25, 0.35)}) {
        ConformalMap mob(MobiusMap{a, 0.9});
        std::vector<Atom> atoms(800);
        for (auto& at : atoms) at = {random_in_disk(rng, 0.95), uw(rng)};
        Measure m(std::move(atoms), dom);
        auto pulled = pull_back(m, mob);
        double C1, C2;
        {
            double r = carleson_norm(pulled, g1).norm / carleson_norm(m, g1).norm;
            C1 = std::max(r, 1.0 / r);
        }
        {
            double r = carleson_norm(pulled, g2).norm / carleson_norm(m, g2).norm;
            C2 = std::max(r, 1.0 / r);
        }
        REQUIRE(C1 >= 1.0);
        REQUIRE(std::isfinite(C1));
        REQUIRE(std::abs(C2 - C1) <= 0.10 * C1);  // stable under grid refinement
    }
}

TEST_CASE("theodorsen: circle converges to the identity in one step") {
    auto res = theodorsen_map([](double) { return 1.0; }, 256);
    REQUIRE(res.converged);
    REQUIRE(res.residual_history.size() == 1);
    for (std::size_t j = 0; j < res.map->n; ++j)
        REQUIRE(res.map->Theta[j] == Catch::Approx(res.map->theta[j]).margin(1e-14));
    for (Cpx z : {Cpx(0.3, 0.2), Cpx(-0.6, 0.1)}) REQUIRE(std::abs(res.map->value(z) - z) < 1e-13);
}

TEST_CASE("theodorsen: star(0.1,3) converges; epsilon condition enforced") {
    StarFamily st{0.1, 3};
    auto rho = radius_function(CurveFamily{st});
    auto res = theodorsen_map(rho, 512, 1e-12, 300);
    REQUIRE(res.converged);
    std::size_t first_below = 0;
    while (first_below < res.residual_history.size() && res.residual_history[first_below] >= 1e-8)
        ++first_below;
    REQUIRE(first_below < 200);
    REQUIRE(res.map->boundary_residual < 1e-10);
    // boundary correspondence monotone
    for (std::size_t j = 0; j + 1 < res.map->n; ++j) REQUIRE(res.map->Theta[j + 1] > res.map->Theta[j]);

    REQUIRE_THROWS_AS(theodorsen_map(radius_function(CurveFamily{StarFamily{0.5, 3}}), 256),
                      std::invalid_argument);
}

TEST_CASE("theodorsen residuals decrease monotonically after the first five iterations") {
    for (const CurveFamily& f : {CurveFamily(StarFamily{0.08, 3}), CurveFamily(StarFamily{0.1, 2}),
                                 CurveFamily(EllipseFamily{0.1})}) {
        auto res = theodorsen_map(radius_function(f), 256, 1e-13, 300);
        REQUIRE(res.converged);
        for (std::size_t i = 5; i + 1 < res.residual_history.size(); ++i)
            REQUIRE(res.residual_history[i + 1] <= res.residual_history[i] * (1 + 1e-12));
    }
}

TEST_CASE("theodorsen inverse round trip and transport") {
    auto res = theodorsen_map(radius_function(CurveFamily{StarFamily{0.1, 3}}), 512);
    ConformalMap map(res.map);
    for (int i = 0; i < 10; ++i) {
        Cpx z = std::polar(0.08 * i, 0.77 * i);
        REQUIRE(std::abs(map.inverse(map.value(z)) - z) < 1e-10);
    }
    auto star_curve = std::make_shared<JordanCurve>(generate_curve(StarFamily{0.1, 3}, 256));
    Rng rng(13);
    std::vector<Atom> atoms(200);
    for (auto& a : atoms) a = {map.value(random_in_disk(rng, 0.8)), 1.0};
    Measure m(std::move(atoms), star_curve);
    auto rt = push_forward(pull_back(m, map), map, star_curve);
    for (std::size_t i = 0; i < m.atoms().size(); ++i) {
        REQUIRE(std::abs(rt.atoms()[i].pos - m.atoms()[i].pos) < 1e-10);
        REQUIRE(std::abs(rt.atoms()[i].weight - m.atoms()[i].weight) < 1e-10);
    }
}

TEST_CASE("welding: circle gives a rotation") {
    auto res = welding(generate_curve(CircleFamily{}, 256));
    const auto& H = res.h.lift_samples();
    double dev = 0;
    for (std::size_t j = 0; j < H.size(); ++j) {
        double rotation = H[0];
        double t = kTwoPi * j / static_cast<double>(H.size());
        dev = std::max(dev, std::abs(H[j] - t - rotation));
    }
    REQUIRE(dev < 1e-6);
    REQUIRE(res.residual < 1e-8);
}

TEST_CASE("welding: ellipse exterior correspondence matches the exact map") {
    // oracle: the exterior Riemann map of the ellipse is z + c/z, whose
    // boundary polar angle is atan2((1-c) sin t, (1+c) cos t)
    double c = 0.2;
    auto curve = generate_curve(EllipseFamily{c}, 512);
    auto res = welding(curve);
    const auto& Te = res.exterior.map->Theta;
    double prev = 0, err = 0;
    for (std::size_t j = 0; j < Te.size(); ++j) {
        double t = kTwoPi * j / static_cast<double>(Te.size());
        double exact = std::atan2((1 - c) * std::sin(t), (1 + c) * std::cos(t));
        while (exact < prev - kPi) exact += kTwoPi;  // unwrap
        prev = exact;
        err = std::max(err, std::abs(Te[j] - exact));
    }
    REQUIRE(err < 1e-10);
    REQUIRE(res.residual < 1e-8);
}

TEST_CASE("welding requires a star-like parametrization") {
    REQUIRE_THROWS_AS(welding(generate_curve(PolyimageFamily{0.3}, 256)), std::invalid_argument);
}
