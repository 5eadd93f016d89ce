#pragma once

// Independent oracles and shared fixtures for the test suites. Everything in
// here is deliberately closed-form or brute-force, kept apart from the
// implementation paths it checks.

#include <vector>

#include "core/fio.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/phantom.hpp"
#include "core/ray.hpp"
#include "core/sound_speed.hpp"
#include "core/trace.hpp"

namespace tat::oracle {

/// Closed-form constant-speed strip: x(t) = y - sign * t * eta_hat, xi = eta,
/// tau = sign * |eta|.
Vec2 straight_position(Vec2 y, Vec2 eta_hat, int sign, double t);

/// Closed-form crossing of the straight strip with {y = 0}: time and point,
/// or false for parallel rays.
bool straight_halfplane_crossing(Vec2 y, Vec2 eta_hat, int sign, double& t_cross, Vec2& x_cross);

/// Closed-form crossings of the straight strip with a circle.
std::vector<double> straight_circle_crossing_times(Vec2 y, Vec2 eta_hat, int sign, Vec2 center,
                                                   double radius);

/// Dense direct evaluation of the one-sided operator (no FFT, no gridding):
/// trace(j, m) = kappa sum_nodes w a e^{i r phi} fhat(node), with fhat by
/// direct summation. Small grids only.
ComplexTrace dense_apply(const PhaseAmpTable& table, const PolarQuadrature& quad,
                         const ScalarField& f);

/// Dense adjoint counterpart of dense_apply.
std::vector<cplx> dense_apply_adjoint(const PhaseAmpTable& table, const PolarQuadrature& quad,
                                      const ComplexTrace& v);

/// Standard small half-space fixture shared across suites.
struct HalfSpaceFixture {
    Grid grid;
    DomainGeometry geom;
    SoundSpeed cs;
    SurfaceDesc surface;
    std::vector<double> times;
};

HalfSpaceFixture make_halfspace(size_t n = 64, double T = 1.0, size_t n_half = 40,
                                bool bump = false, double bump_amp = 0.1);

}  // namespace tat::oracle
