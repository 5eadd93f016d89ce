#include "support/oracles.hpp"

#include <cmath>

namespace tat::oracle {

Vec2 straight_position(Vec2 y, Vec2 eta_hat, int sign, double t) {
    return y - eta_hat * (static_cast<double>(sign) * t);
}

bool straight_halfplane_crossing(Vec2 y, Vec2 eta_hat, int sign, double& t_cross, Vec2& x_cross) {
    double v = -static_cast<double>(sign) * eta_hat.y;  // dy/dt
    if (std::abs(v) < 1e-14) return false;
    t_cross = -y.y / v;
    x_cross = straight_position(y, eta_hat, sign, t_cross);
    return true;
}

std::vector<double> straight_circle_crossing_times(Vec2 y, Vec2 eta_hat, int sign, Vec2 center,
                                                   double radius) {
    // |y - s*sign*t*eta - center|^2 = R^2, speed 1 so t parameterizes length
    Vec2 d = y - center;
    Vec2 v = eta_hat * (-static_cast<double>(sign));
    double b = dot(d, v);
    double c = norm2(d) - radius * radius;
    double disc = b * b - c;
    std::vector<double> out;
    if (disc <= 0.0) return out;
    double sd = std::sqrt(disc);
    out.push_back(-b - sd);
    out.push_back(-b + sd);
    return out;
}

ComplexTrace dense_apply(const PhaseAmpTable& table, const PolarQuadrature& quad,
                         const ScalarField& f) {
    std::vector<cplx> fc(f.values.begin(), f.values.end());
    std::vector<cplx> fhat(quad.nuft->n_nodes());
    quad.nuft->forward_direct(fc.data(), fhat.data());

    size_t nd = table.n_dirs();
    size_t step = quad.n_quad / nd;
    ComplexTrace out;
    out.surface = table.surface();
    out.times = table.times();
    out.values.assign(table.n_surf() * table.n_times(), cplx{});
    double kappa = quad.dtheta() / (2.0 * kTwoPi * kTwoPi);
    // dense path samples the table bins directly (quadrature restricted to
    // the table's own directions when n_quad is a multiple of n_dirs)
    for (size_t j = 0; j < table.n_surf(); ++j)
        for (size_t m = 0; m < table.n_times(); ++m) {
            if (!table.row_valid(j, m)) continue;
            cplx acc{};
            for (size_t k = 0; k < nd; ++k) {
                size_t q = k * step;
                double phi1 = table.phi[table.idx(j, m, k)];
                double a = table.amp[table.idx(j, m, k)];
                for (size_t mi = 0; mi < quad.n_radial; ++mi) {
                    double r = quad.dr * static_cast<double>(mi + 1);
                    double ph = r * phi1;
                    acc += quad.radial_weight(mi) * a * cplx{std::cos(ph), std::sin(ph)} *
                           fhat[q * quad.n_radial + mi];
                }
            }
            out.values[out.idx(j, m)] = acc * kappa * static_cast<double>(step);
        }
    return out;
}

std::vector<cplx> dense_apply_adjoint(const PhaseAmpTable& table, const PolarQuadrature& quad,
                                      const ComplexTrace& v) {
    size_t nd = table.n_dirs();
    size_t step = quad.n_quad / nd;
    double kappa = quad.dtheta() / (2.0 * kTwoPi * kTwoPi) * static_cast<double>(step);
    const Grid& g = quad.fgrid;
    std::vector<cplx> field(g.size(), cplx{});
    for (size_t node = 0; node < g.size(); ++node) {
        Vec2 y = g.node2_flat(node);
        cplx acc{};
        for (size_t k = 0; k < nd; ++k) {
            for (size_t mi = 0; mi < quad.n_radial; ++mi) {
                double r = quad.dr * static_cast<double>(mi + 1);
                Vec2 eta = table.dir(k) * r;
                cplx inner{};
                for (size_t j = 0; j < table.n_surf(); ++j)
                    for (size_t m = 0; m < table.n_times(); ++m) {
                        if (!table.row_valid(j, m)) continue;
                        double phi = r * table.phi[table.idx(j, m, k)];
                        double a = table.amp[table.idx(j, m, k)];
                        inner += trace_weight(table.surface(), table.times(), j, m) * a *
                                 cplx{std::cos(-phi), std::sin(-phi)} * v.values[v.idx(j, m)];
                    }
                double ph = dot(y, eta);
                acc += quad.radial_weight(mi) * inner * cplx{std::cos(ph), std::sin(ph)};
            }
        }
        field[node] = acc * kappa;
    }
    return field;
}

HalfSpaceFixture make_halfspace(size_t n, double T, size_t n_half, bool bump, double bump_amp) {
    double h = 2.54 / static_cast<double>(n - 1);
    Grid grid({-1.27, -1.27}, {h, h}, {n, n});
    DomainGeometry geom = DomainGeometry::half_space(-1.27, 1.27, T);
    SoundSpeedModel model;
    if (bump) {
        model.name = "radial-bump";
        model.bumps = {{{0.12, -0.42}, 0.35, bump_amp}};
    }
    SoundSpeed cs = make_sound_speed(model, grid, geom);
    SurfaceDesc surface = make_surface(geom, n);
    return {grid, geom, std::move(cs), std::move(surface), two_sided_times(T, n_half)};
}

}  // namespace tat::oracle
