#include <catch2/catch_amalgamated.hpp>

#include "cm/geometry.hpp"
#include "oracles.hpp"

using namespace cm;

namespace {
JordanCurve circle(std::size_t n = 256) { return generate_curve(CircleFamily{}, n); }

JordanCurve unit_square(std::size_t n = 256) {
    PolygonFamily sq{{Cpx(0, 0), Cpx(1, 0), Cpx(1, 1), Cpx(0, 1)}};
    return generate_curve(sq, n);
}
}  // namespace

TEST_CASE("generate_curve: analytic families sampled exactly") {
    auto c = circle(256);
    REQUIRE(c.size() == 256);
    for (std::size_t j = 0; j < 256; ++j) {
        REQUIRE(std::abs(std::abs(c.at(j)) - 1.0) < 1e-15);
        REQUIRE(std::abs(c.at(j) - std::polar(1.0, kTwoPi * j / 256.0)) < 1e-15);
    }

    auto p = generate_curve(PolyimageFamily{0.3}, 256);
    for (std::size_t j = 0; j < 256; ++j) {
        double t = kTwoPi * j / 256.0;
        REQUIRE(std::abs(p.at(j) - (std::polar(1.0, t) + 0.3 * std::polar(1.0, 2 * t))) < 1e-14);
    }
}

TEST_CASE("generate_curve: koch prefractal generator") {
    REQUIRE(koch_vertices(3).size() == 3 * 4 * 4 * 4);
    auto k = generate_curve(KochFamily{3}, 1024);
    REQUIRE(k.size() == 1024);  // simple (sweep test passed in the constructor)
}

TEST_CASE("generate_curve: parameter and sampling preconditions") {
    REQUIRE_THROWS_AS(generate_curve(PolyimageFamily{0.6}, 256), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_curve(StarFamily{0.5, 3}, 256), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_curve(LensFamily{2.5}, 256), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_curve(CircleFamily{}, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_curve(CircleFamily{}, 32), std::invalid_argument);
    // a straight segment is not a Jordan curve
    REQUIRE_THROWS_AS(generate_curve(PolygonFamily{{Cpx(0, 0), Cpx(1, 0)}}, 256),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(generate_curve(PolygonFamily{{Cpx(0, 0), Cpx(0.5, 0), Cpx(1, 0)}}, 256),
                      std::invalid_argument);
}

TEST_CASE("self-intersection sweep rejects crossing polygons") {
    PolygonFamily bow{{Cpx(0, 0), Cpx(1, 1), Cpx(1, 0), Cpx(0, 1)}};
    REQUIRE_THROWS_AS(generate_curve(bow, 256), std::invalid_argument);
}

TEST_CASE("chord_arc_constant: unit circle antipodal pair") {
    auto c = circle(256);
    auto rep = chord_arc_constant(c);
    // sampled polyline value: (n/2) segments of length 2 sin(pi/n) over chord 2
    double expected = 256.0 * std::sin(kPi / 256.0) / 2.0;
    REQUIRE(rep.constant == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(rep.constant < kPi / 2);
    REQUIRE(rep.constant > 1.5706);
    REQUIRE(std::abs(rep.witness_pair.first - rep.witness_pair.second) ==
            Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("chord_arc_constant: unit square midpoint pair") {
    auto rep = chord_arc_constant(unit_square(256));
    REQUIRE(rep.constant == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(std::abs(rep.witness_pair.first - rep.witness_pair.second) ==
            Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("chord_arc: koch generator-edge ratio and brute-force supremum") {
    // Oracle: brute force over raw generator vertices.
    for (int L : {1, 2}) {
        double sup = oracle::brute_force_chord_arc(koch_vertices(L));
        double expected_sup = 2.25 * std::pow(4.0 / 3.0, L);  // frozen from the oracle
        REQUIRE(sup == Catch::Approx(expected_sup).epsilon(1e-12));
    }
    // Implementation on the resampled curve: generator-edge endpoints (the
    // snowflake corners) realize the ratio (4/3)^L; the overall constant
    // approaches the oracle supremum from below.
    for (int L : {1, 2}) {
        std::size_t n = 2048;
        auto k = generate_curve(KochFamily{L}, n);
        std::size_t i = 0, j = static_cast<std::size_t>(std::lround(n / 3.0));
        double ratio = chord_arc_ratio(k, i, j);
        REQUIRE(ratio == Catch::Approx(std::pow(4.0 / 3.0, L)).epsilon(0.02));
        double sup = chord_arc_constant(k).constant;
        REQUIRE(sup <= 2.25 * std::pow(4.0 / 3.0, L) + 1e-9);
        REQUIRE(sup >= 0.95 * 2.25 * std::pow(4.0 / 3.0, L));
    }
}

TEST_CASE("chord_arc rejects degenerate chords") {
    std::vector<Cpx> s(64);
    for (std::size_t j = 0; j < 64; ++j) s[j] = std::polar(1.0, kTwoPi * j / 64.0);
    s[40] = s[8];  // coincident samples far apart in parameter
    REQUIRE_THROWS_AS(
        [&] {
            JordanCurve bad(std::move(s), CircleFamily{}, false);
            return chord_arc_constant(bad);
        }(),
        std::invalid_argument);
}

TEST_CASE("ahlfors_constant: circle through its own diameter disk") {
    auto c = circle(256);
    auto rep = ahlfors_constant(c, {Cpx(0, 0)}, {1.0});
    double perimeter = 256.0 * 2.0 * std::sin(kPi / 256.0);
    REQUIRE(rep.constant == Catch::Approx(perimeter).epsilon(1e-12));
    REQUIRE(rep.constant == Catch::Approx(2 * kPi).epsilon(1e-3));
    REQUIRE_THROWS_AS(ahlfors_constant(c, {}, {1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(ahlfors_constant(c, {Cpx(0, 0)}, {-1.0}), std::invalid_argument);
}

TEST_CASE("ahlfors_constant grows with koch level") {
    double prev = 0;
    for (int L = 1; L <= 4; ++L) {
        auto k = generate_curve(KochFamily{L}, 2048);
        double v = ahlfors_constant(k, 24).constant;
        REQUIRE(v > prev);
        prev = v;
    }
}

TEST_CASE("regularity lower bound 2(1 - 10/N) for smooth families") {
    for (std::size_t n : {128, 256}) {
        for (const CurveFamily& f :
             {CurveFamily(CircleFamily{}), CurveFamily(EllipseFamily{0.2}), CurveFamily(StarFamily{0.1, 3})}) {
            auto c = generate_curve(f, n);
            REQUIRE(ahlfors_constant(c, 24).constant >= 2.0 * (1.0 - 10.0 / n));
        }
    }
}

TEST_CASE("distance_to_curve on the sampled circle") {
    auto c = circle(256);
    REQUIRE(distance_to_curve(Cpx(0, 0), c) == Catch::Approx(std::cos(kPi / 256)).epsilon(1e-12));
    REQUIRE(distance_to_curve(Cpx(0, 0), c) == Catch::Approx(1.0).margin(1e-3));
    REQUIRE(distance_to_curve(Cpx(0.5, 0), c) == Catch::Approx(0.5).margin(1e-3));
    REQUIRE(distance_to_curve(Cpx(2, 0), c) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("locate_point / contains with winding-number oracle") {
    auto c = circle(256);
    REQUIRE(contains(Cpx(0, 0), c));
    REQUIRE_FALSE(contains(Cpx(3, 0), c));
    REQUIRE(locate_point(Cpx(1, 0), c) == PointLocation::OnBoundary);

    auto p = generate_curve(PolyimageFamily{0.3}, 256);
    auto z = [](double t) { return std::polar(1.0, t) + 0.3 * std::polar(1.0, 2 * t); };
    auto dz = [](double t) {
        return Cpx(0, 1) * std::polar(1.0, t) + 0.6 * Cpx(0, 1) * std::polar(1.0, 2 * t);
    };
    double w = oracle::winding_quadrature(z, dz, Cpx(0.99, 0));
    REQUIRE(w == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(contains(Cpx(0.99, 0), p));
}

TEST_CASE("contains invariant under cyclic re-indexing") {
    auto base = circle(128);
    std::vector<Cpx> s(base.samples().begin(), base.samples().end());
    for (std::size_t shift : {1u, 17u, 64u}) {
        std::vector<Cpx> rotated(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) rotated[j] = s[(j + shift) % s.size()];
        JordanCurve c2(std::move(rotated), CircleFamily{}, false);
        for (Cpx p : {Cpx(0.3, 0.4), Cpx(1.7, -0.2), Cpx(-0.9, 0.05)})
            REQUIRE(contains(p, c2) == contains(p, base));
    }
}

TEST_CASE("estimators monotone under sample refinement") {
    for (const CurveFamily& f :
         {CurveFamily(CircleFamily{}), CurveFamily(EllipseFamily{0.3}), CurveFamily(PolyimageFamily{0.25})}) {
        double prev_ca = 0;
        for (std::size_t n : {128, 256, 512}) {
            double ca = chord_arc_constant(generate_curve(f, n)).constant;
            REQUIRE(ca >= prev_ca - 1e-12);
            prev_ca = ca;
        }
    }
    // Ahlfors sweep on a fixed (center, radius) grid: refinement lengthens the
    // polyline overall, but near disk tangency the refined curve can exit the
    // disk and shed a sliver of intersection length, so the value is monotone
    // only up to that sliver (0.5% slack observed on the ellipse family).
    std::vector<Cpx> centers = {Cpx(0, 0), Cpx(1, 0), Cpx(0, 1)};
    std::vector<double> radii = {0.25, 0.5, 1.0, 2.0};
    double prev = 0;
    for (std::size_t n : {128, 256, 512}) {
        double v = ahlfors_constant(generate_curve(EllipseFamily{0.3}, n), centers, radii).constant;
        REQUIRE(v >= prev * (1 - 5e-3));
        prev = v;
    }
}
