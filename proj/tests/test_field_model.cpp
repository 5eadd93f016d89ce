#include <doctest.h>

#include <filesystem>

#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/phantom.hpp"
#include "core/sound_speed.hpp"

using namespace tat;

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid({0.0}, {0.1}, {4}), ValidationError);       // dim 1
    CHECK_THROWS_AS(Grid({0, 0}, {0.0, 0.1}, {4, 4}), ValidationError);
    CHECK_THROWS_AS(Grid({0, 0}, {0.1, 0.1}, {1, 4}), ValidationError);
    Grid g({-1, -1}, {0.5, 0.5}, {5, 5});
    CHECK(g.size() == 25);
    CHECK(g.node2(0, 0).x == doctest::Approx(-1.0));
    CHECK(g.node2(4, 4).y == doctest::Approx(1.0));
    Grid g3({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    CHECK(g3.dim() == 3);
}

TEST_CASE("raw field round trip") {
    Grid g({-1, -2}, {0.25, 0.5}, {8, 6});
    ScalarField f(g);
    for (size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(0.1 * double(i));
    auto path = std::filesystem::temp_directory_path() / "tat_field_test.f64";
    write_field_raw(f, path.string());
    ScalarField back = read_field_raw(path.string());
    CHECK(back.grid == g);
    for (size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);
}

TEST_CASE("constant model is identically one") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    SoundSpeed cs = make_sound_speed({}, g, geom);
    CHECK(cs.c({0.3, -0.7}) == 1.0);
    CHECK(cs.c_max() == 1.0);
    CHECK(cs.is_constant());
}

TEST_CASE("radial bump profile hits its extremes") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    SoundSpeedModel m;
    m.name = "radial-bump";
    m.bumps = {{{0.0, -0.5}, 0.3, 0.2}};
    SoundSpeed cs = make_sound_speed(m, g, geom);
    CHECK(cs.c({0.0, -0.5}) == doctest::Approx(1.2));
    CHECK(cs.c({0.0, -0.5 + 0.3}) == doctest::Approx(1.0));
    CHECK(cs.c({0.31, -0.5}) == doctest::Approx(1.0));
    cs.check_invariants(geom);
}

TEST_CASE("bump escaping the region is rejected") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    SoundSpeedModel m;
    m.name = "radial-bump";
    m.bumps = {{{0.0, -0.2}, 0.3, 0.2}};  // overlaps {y >= 0}
    CHECK_THROWS_AS(make_sound_speed(m, g, geom), ValidationError);
}

TEST_CASE("analytic speed derivatives match finite differences") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {64, 64});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    SoundSpeedModel m;
    m.name = "multi-bump";
    m.bumps = {{{0.1, -0.5}, 0.3, 0.15}, {{-0.3, -0.6}, 0.25, -0.1}};
    SoundSpeed cs = make_sound_speed(m, g, geom);
    double eps = 1e-6;
    for (Vec2 p : {Vec2{0.05, -0.45}, Vec2{-0.25, -0.55}, Vec2{0.2, -0.6}}) {
        Vec2 gfd{(cs.c2({p.x + eps, p.y}) - cs.c2({p.x - eps, p.y})) / (2 * eps),
                 (cs.c2({p.x, p.y + eps}) - cs.c2({p.x, p.y - eps})) / (2 * eps)};
        Vec2 ga = cs.grad_c2(p);
        CHECK(norm(ga - gfd) < 1e-7);
        Mat2 H = cs.hess_c2(p);
        double hxx = (cs.c2({p.x + eps, p.y}) - 2 * cs.c2(p) + cs.c2({p.x - eps, p.y})) / (eps * eps);
        CHECK(H.a == doctest::Approx(hxx).epsilon(1e-4));
    }
}

TEST_CASE("phantom: empty, single disk, additive overlap") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);

    auto zero = make_phantom({}, g, geom);
    CHECK(zero.field.max_abs() == 0.0);

    PhantomPrimitive d1{"disk", 1.0, {0.0, -0.5}, 0.3};
    auto one = make_phantom({d1}, g, geom);
    CHECK(one.field.sample2({0.0, -0.5}) == doctest::Approx(1.0));
    CHECK(one.field.sample2({0.9, -0.9}) == doctest::Approx(0.0));

    PhantomPrimitive d2{"disk", 2.0, {0.15, -0.5}, 0.3};
    auto two = make_phantom({d1, d2}, g, geom);
    CHECK(two.field.sample2({0.08, -0.52}) == doctest::Approx(3.0));
}

TEST_CASE("phantom escaping the region is rejected") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {64, 64});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    PhantomPrimitive d{"disk", 1.0, {0.0, -0.1}, 0.3};
    CHECK_THROWS_AS(make_phantom({d}, g, geom), ValidationError);
}

TEST_CASE("phantom edge set sits on the sampled jump") {
    Grid g({-1.27, -1.27}, {0.01, 0.01}, {256, 256});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    PhantomPrimitive d{"disk", 1.0, {0.1, -0.6}, 0.25};
    auto ph = make_phantom({d}, g, geom, 32);
    REQUIRE(ph.edges.size() == 32);
    double h = g.min_spacing();
    for (const auto& e : ph.edges) {
        // the sampled field must jump within one cell of the analytic edge
        double inside = ph.field.sample2(e.position - e.normal * (1.5 * h));
        double outside = ph.field.sample2(e.position + e.normal * (1.5 * h));
        CHECK(inside > 0.5);
        CHECK(outside < 0.5);
    }
}

TEST_CASE("polygon phantom with outward normals") {
    Grid g({-1.27, -1.27}, {0.01, 0.01}, {256, 256});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    PhantomPrimitive sq;
    sq.type = "polygon";
    sq.amplitude = 2.0;
    sq.vertices = {{-0.3, -0.8}, {0.3, -0.8}, {0.3, -0.3}, {-0.3, -0.3}};
    auto ph = make_phantom({sq}, g, geom, 40);
    CHECK(ph.field.sample2({0.0, -0.55}) == doctest::Approx(2.0));
    CHECK(ph.field.sample2({0.5, -0.55}) == doctest::Approx(0.0));
    for (const auto& e : ph.edges) {
        double inside = ph.field.sample2(e.position - e.normal * 0.02);
        double outside = ph.field.sample2(e.position + e.normal * 0.02);
        CHECK(inside > outside);
    }
}

TEST_CASE("mollified phantom keeps mass and smooths the jump") {
    Grid g({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::half_space(-1.27, 1.27, 1.0);
    PhantomPrimitive d{"disk", 1.0, {0.0, -0.5}, 0.3};
    auto ph = make_phantom({d}, g, geom);
    ScalarField sm = mollify(ph.field, 2.0);
    double mass0 = 0.0, mass1 = 0.0;
    for (double v : ph.field.values) mass0 += v;
    for (double v : sm.values) mass1 += v;
    CHECK(mass1 == doctest::Approx(mass0).epsilon(1e-6));
    CHECK(sm.sample2({0.0, -0.5}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("convex geometry invariants") {
    CHECK_THROWS_AS(DomainGeometry::convex_body({0, 0}, 1.0, 0.0, kPi, 0.0, kPi, 2.0),
                    ValidationError);  // GammaTilde not compactly contained
    auto ok = DomainGeometry::convex_body({0, 0}, 1.0, 0.0, kPi, 0.3, kPi - 0.3, 2.0);
    CHECK(ok.in_omega({0.0, 0.0}));
    CHECK(!ok.in_omega({1.5, 0.0}));
}
