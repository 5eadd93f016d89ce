#include <doctest.h>

#include <cmath>

#include "core/fan.hpp"
#include "core/ray.hpp"
#include "core/visibility.hpp"
#include "support/oracles.hpp"

using namespace tat;

TEST_CASE("constant speed strips follow the closed forms") {
    auto fx = oracle::make_halfspace(64, 1.0, 40);
    Vec2 y{0.2, -0.6};
    for (double ang : {0.3, 1.1, 2.7, 4.0}) {
        Vec2 eta{std::cos(ang), std::sin(ang)};
        for (int sign : {+1, -1}) {
            auto strip = trace_bichar(y, eta, sign, fx.cs, -0.8, 0.8, 0.1);
            CHECK(strip.tau == doctest::Approx(sign * 1.0));
            for (const auto& s : strip.samples) {
                Vec2 xe = oracle::straight_position(y, eta, sign, s.t);
                CHECK(norm(s.x - xe) < 1e-12);
                CHECK(norm(s.xi - eta) < 1e-12);
                CHECK(std::abs(s.phi - dot(y, eta)) < 1e-12);
                CHECK(std::abs(s.a - 1.0) < 1e-14);
                CHECK(std::abs(s.det_jx - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("hamiltonian is conserved along bump strips") {
    // default-step drift bound holds at the production grid scale
    auto fx = oracle::make_halfspace(128, 1.0, 40, true, 0.15);
    for (double ang : {0.2, 1.4, 3.3, 5.1}) {
        Vec2 eta{std::cos(ang), std::sin(ang)};
        auto strip = trace_bichar({0.1, -0.45}, eta, +1, fx.cs, -1.0, 1.0, 0.05);
        CHECK(strip.max_hamiltonian_drift < 1e-8);
        for (const auto& s : strip.samples) {
            PhasePoint p{s.x, s.xi, strip.tau, s.t};
            CHECK(p.on_shell_residual(fx.cs) < 1e-8);
        }
    }
}

TEST_CASE("metric unit speed and phase constancy") {
    auto fx = oracle::make_halfspace(64, 1.0, 40, true, 0.12);
    auto strip = trace_bichar({0.05, -0.5}, {0.6, 0.8}, +1, fx.cs, 0.0, 1.0, 0.01);
    double h_ode = default_h_ode(fx.cs);
    for (size_t i = 1; i < strip.samples.size(); ++i) {
        const auto& a = strip.samples[i - 1];
        const auto& b = strip.samples[i];
        double speed = norm(b.x - a.x) / (b.t - a.t);
        double c_mid = fx.cs.c((a.x + b.x) / 2.0);
        CHECK(std::abs(speed - c_mid) < 10.0 * h_ode);  // chord vs arc + ODE error
        CHECK(std::abs(b.phi - strip.samples[0].phi) < 1e-8);
    }
}

TEST_CASE("flow is reversible") {
    auto fx = oracle::make_halfspace(64, 1.0, 40, true, 0.15);
    RayOptions opts;
    RayIntegrator ri(fx.cs, {0.0, -0.5}, {0.7071067811865476, 0.7071067811865476}, +1, opts);
    ri.advance_to(0.9);
    ri.advance_to(0.0);
    double h_ode = default_h_ode(fx.cs);
    CHECK(norm(ri.x() - Vec2{0.0, -0.5}) < 10.0 * h_ode * h_ode);
    CHECK(norm(ri.xi() - Vec2{0.7071067811865476, 0.7071067811865476}) < 10.0 * h_ode * h_ode);
}

TEST_CASE("minus strip mirrors the plus strip at constant speed") {
    auto fx = oracle::make_halfspace(48, 0.8, 32);
    Vec2 y{-0.2, -0.7};
    Vec2 eta{0.8, 0.6};
    auto sp = trace_bichar(y, eta, +1, fx.cs, -0.6, 0.6, 0.05);
    auto sm = trace_bichar(y, eta, -1, fx.cs, -0.6, 0.6, 0.05);
    REQUIRE(sp.samples.size() == sm.samples.size());
    size_t n = sp.samples.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = sp.samples[i];
        const auto& b = sm.samples[n - 1 - i];
        CHECK(std::abs(a.t + b.t) < 1e-12);
        CHECK(norm(a.x - b.x) < 1e-12);
    }
}

TEST_CASE("endpoint map closed forms on the half-space") {
    auto fx = oracle::make_halfspace(64, 1.0, 40);

    auto cr = endpoint_crossings({0.0, -0.5}, {0.0, -1.0}, +1, fx.cs, fx.geom, 1.0);
    REQUIRE(cr.size() == 1);
    CHECK(cr[0].t == doctest::Approx(0.5));
    CHECK(cr[0].x.x == doctest::Approx(0.0));
    CHECK(cr[0].w == doctest::Approx(0.0));

    // parallel ray: invisible direction
    auto none = endpoint_crossings({0.0, -0.5}, {1.0, 0.0}, +1, fx.cs, fx.geom, 1.0);
    CHECK(none.empty());
    auto none2 = endpoint_crossings({0.0, -0.5}, {1.0, 0.0}, -1, fx.cs, fx.geom, 1.0);
    CHECK(none2.empty());

    auto cr2 = endpoint_crossings({0.2, -0.3}, {0.0, 1.0}, -1, fx.cs, fx.geom, 1.0);
    REQUIRE(cr2.size() == 1);
    CHECK(cr2[0].t == doctest::Approx(0.3));
    CHECK(cr2[0].x.x == doctest::Approx(0.2));
}

TEST_CASE("crossing times agree with the straight oracle for many directions") {
    auto fx = oracle::make_halfspace(64, 2.0, 40);
    Vec2 y{0.1, -0.4};
    for (int k = 0; k < 16; ++k) {
        double ang = kTwoPi * (k + 0.37) / 16.0;
        Vec2 eta{std::cos(ang), std::sin(ang)};
        if (std::abs(eta.y) < 0.1) continue;
        for (int sign : {+1, -1}) {
            double t_o;
            Vec2 x_o;
            REQUIRE(oracle::straight_halfplane_crossing(y, eta, sign, t_o, x_o));
            auto cr = endpoint_crossings(y, eta, sign, fx.cs, fx.geom, 2.0);
            if (std::abs(t_o) > 2.0) {
                CHECK(cr.empty());
                continue;
            }
            REQUIRE(cr.size() == 1);
            CHECK(cr[0].t == doctest::Approx(t_o).epsilon(1e-10));
            CHECK(cr[0].x.x == doctest::Approx(x_o.x).epsilon(1e-10));
        }
    }
}

TEST_CASE("bump crossings stay transversal and unique per time sign") {
    auto fx = oracle::make_halfspace(64, 2.0, 40, true, 0.15);
    for (int k = 0; k < 12; ++k) {
        double ang = kTwoPi * (k + 0.5) / 12.0;
        Vec2 eta{std::cos(ang), std::sin(ang)};
        if (std::abs(eta.y) < 0.15) continue;
        auto cr = endpoint_crossings({0.1, -0.45}, eta, +1, fx.cs, fx.geom, 2.0);
        CHECK(cr.size() <= 2);
        for (const auto& c : cr) CHECK(std::abs(c.x.y) < 1e-9);
    }
}

TEST_CASE("visibility mask: constant speed, full hyperplane, bin-exact law") {
    auto fx = oracle::make_halfspace(48, 1.0, 32);
    // wide-open surface so only the glancing cut matters
    auto geom = DomainGeometry::half_space(-1e5, 1e5, 1.0);
    Grid vis_grid({-0.9, -0.9}, {0.3, 0.26}, {7, 4});
    VisibilityOptions vo;
    vo.t_horizon = 1e4;
    ConeMask mask = classify_visibility(vis_grid, 64, fx.cs, geom, {+1, -1}, vo);
    for (size_t node = 0; node < vis_grid.size(); ++node) {
        if (!geom.in_omega(vis_grid.node2_flat(node))) continue;
        for (size_t b = 0; b < 64; ++b) {
            double etay = std::abs(mask.dir(b).y);
            if (etay > vo.glancing_threshold + vo.angular_margin)
                CHECK(mask.weight(node, b) == doctest::Approx(1.0));
            else if (etay <= vo.glancing_threshold)
                CHECK(mask.weight(node, b) == 0.0);
        }
    }
}

TEST_CASE("zero horizon gives the empty mask") {
    auto fx = oracle::make_halfspace(32, 1.0, 16);
    Grid vis_grid({-0.5, -0.5}, {0.25, 0.2}, {4, 3});
    VisibilityOptions vo;
    vo.t_horizon = 1e-9;
    ConeMask mask = classify_visibility(vis_grid, 16, fx.cs, fx.geom, {+1, -1}, vo);
    for (float w : mask.weights) CHECK(w == 0.0f);
}

TEST_CASE("visibility through a circular arc matches the geometric oracle") {
    Grid grid({-1.27, -1.27}, {0.02, 0.02}, {128, 128});
    auto geom = DomainGeometry::convex_body({0, 0}, 1.0, 0.0, kPi, 0.35, kPi - 0.35, 3.0);
    SoundSpeed cs = make_sound_speed({}, grid, geom);
    Grid vis_grid({0.0, 0.0}, {0.1, 0.1}, {2, 2});  // near the center
    VisibilityOptions vo;
    vo.t_horizon = 3.0;
    ConeMask mask = classify_visibility(vis_grid, 64, cs, geom, {+1, -1}, vo);
    // from the origin the strip exits at angle of -sign*eta; visible iff that
    // exit angle (for either sign) lies in GammaTilde
    for (size_t b = 0; b < 64; ++b) {
        Vec2 eta = mask.dir(b);
        auto in_tilde = [&](Vec2 exit_dir) {
            double a = std::atan2(exit_dir.y, exit_dir.x);
            if (a < 0) a += kTwoPi;
            return a > 0.35 + 0.06 && a < kPi - 0.35 - 0.06;
        };
        bool expect = in_tilde(-eta) || in_tilde(eta);
        bool strictly_outside = !(in_tilde(-eta) || in_tilde(eta));
        double w = mask.weight(0, b);
        if (expect) CHECK(w > 0.0);
        if (strictly_outside) {
            // allow the taper transition zone near the arc ends
            double a1 = std::atan2(eta.y, eta.x);
            if (a1 < 0) a1 += kTwoPi;
            auto angdist = [&](double a, double b2) {
                double d = std::abs(a - b2);
                return std::min(d, kTwoPi - d);
            };
            double margin = std::min(
                std::min(angdist(a1, 0.35), angdist(a1, kPi - 0.35)),
                std::min(angdist(a1 + kPi, 0.35), angdist(a1 + kPi, kPi - 0.35)));
            if (margin > 0.15) CHECK(w == 0.0);
        }
    }
}

TEST_CASE("endpoint injectivity holds for a clean fan") {
    auto fx = oracle::make_halfspace(64, 4.0, 40);
    std::vector<Vec2> dirs;
    for (int k = 0; k < 64; ++k) {
        double ang = kTwoPi * k / 64.0;
        Vec2 eta{std::cos(ang), std::sin(ang)};
        if (eta.y < -0.2) dirs.push_back(eta);  // downward cone crosses upward
    }
    auto rep = check_endpoint_injectivity({0.0, -0.5}, dirs, +1, fx.cs, fx.geom, 4.0, 1e-3);
    CHECK(rep.pass);
    CHECK(rep.collisions.empty());
    CHECK(rep.min_separation > 1e-3);
}

TEST_CASE("endpoint injectivity with the bump passes after the monitor") {
    // horizon kept below the wavefront-shoulder caustic of the bump
    auto fx = oracle::make_halfspace(64, 1.2, 40, true, 0.1);
    std::vector<Vec2> dirs;
    for (int k = 0; k < 32; ++k) {
        double ang = kTwoPi * k / 32.0;
        Vec2 eta{std::cos(ang), std::sin(ang)};
        if (eta.y < -0.3) dirs.push_back(eta);
    }
    // monitor first: no conjugate points on this fan
    for (const auto& d : dirs) {
        auto strip = trace_bichar({0.0, -0.5}, d, +1, fx.cs, 0.0, 1.2, 0.05);
        CHECK(!conjugate_point_monitor(strip, 0.05));
    }
    auto rep = check_endpoint_injectivity({0.0, -0.5}, dirs, +1, fx.cs, fx.geom, 1.2, 1e-3);
    CHECK(rep.pass);
}

TEST_CASE("conjugate monitor: parallel straight rays never focus") {
    auto fx = oracle::make_halfspace(48, 1.0, 32);
    auto strip = trace_bichar({0.0, -0.6}, {0.2, 0.98}, +1, fx.cs, -1.0, 1.0, 0.05);
    CHECK(!conjugate_point_monitor(strip, 0.5).has_value());
}

TEST_CASE("conjugate monitor: a strong lens focuses in finite time") {
    auto fx = oracle::make_halfspace(64, 2.0, 40, true, -0.45);  // slow lens
    bool detected = false;
    double t_first = 1e9;
    for (int k = -3; k <= 3; ++k) {
        Vec2 y{0.12 + 0.05 * k, -1.1};
        auto strip = trace_bichar(y, {0.0, -1.0}, +1, fx.cs, 0.0, 2.0, 0.02);
        if (auto t = conjugate_point_monitor(strip, 0.05)) {
            detected = true;
            t_first = std::min(t_first, *t);
        }
    }
    CHECK(detected);
    CHECK(t_first > 0.0);
    CHECK(t_first < 2.0);
}

TEST_CASE("weak bump with a short horizon stays conjugate-point-free") {
    auto fx = oracle::make_halfspace(64, 0.8, 32, true, 0.1);
    for (int k = 0; k < 16; ++k) {
        double ang = kTwoPi * k / 16.0;
        auto strip =
            trace_bichar({0.1, -0.45}, {std::cos(ang), std::sin(ang)}, +1, fx.cs, -0.8, 0.8, 0.05);
        CHECK(!conjugate_point_monitor(strip, 0.05).has_value());
    }
}

TEST_CASE("strips leaving the box are truncated and flagged") {
    auto fx = oracle::make_halfspace(48, 1.0, 32);
    RayOptions opts;
    opts.box_pad = 0.1;
    auto strip = trace_bichar({0.0, -0.5}, {0.0, -1.0}, +1, fx.cs, 0.0, 5.0, 0.1, nullptr, opts);
    CHECK(strip.truncated);
}
