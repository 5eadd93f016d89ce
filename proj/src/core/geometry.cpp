#include "core/geometry.hpp"

#include <cmath>

namespace tat {

DomainGeometry DomainGeometry::half_space(double lo, double hi, double t_max) {
    DomainGeometry g;
    g.kind = Kind::HalfSpace;
    g.surface_lo = lo;
    g.surface_hi = hi;
    g.t_max = t_max;
    g.validate();
    return g;
}

DomainGeometry DomainGeometry::convex_body(Vec2 center, double radius, double gamma_lo,
                                           double gamma_hi, double tilde_lo, double tilde_hi,
                                           double t_max) {
    DomainGeometry g;
    g.kind = Kind::ConvexBody;
    g.center = center;
    g.radius = radius;
    g.gamma_lo = gamma_lo;
    g.gamma_hi = gamma_hi;
    g.gamma_tilde_lo = tilde_lo;
    g.gamma_tilde_hi = tilde_hi;
    g.t_max = t_max;
    g.validate();
    return g;
}

bool DomainGeometry::full_circle() const {
    return kind == Kind::ConvexBody && gamma_hi - gamma_lo >= kTwoPi - 1e-12;
}

double DomainGeometry::boundary_defining(Vec2 p) const {
    if (kind == Kind::HalfSpace) return p.y;
    return norm(p - center) - radius;
}

Vec2 DomainGeometry::boundary_normal(Vec2 p) const {
    if (kind == Kind::HalfSpace) return {0.0, 1.0};
    return normalized(p - center);
}

bool DomainGeometry::in_omega(Vec2 p, double margin) const {
    return boundary_defining(p) < -margin;
}

void DomainGeometry::validate() const {
    if (!(t_max > 0.0)) throw ValidationError("geometry: T_max must be > 0");
    if (kind == Kind::HalfSpace) {
        if (!(surface_hi > surface_lo))
            throw ValidationError("geometry: empty measured segment");
        return;
    }
    if (!(radius > 0.0)) throw ValidationError("geometry: radius must be > 0");
    // Circle boundary: curvature 1/radius > 0 everywhere, strictly convex.
    if (!(gamma_hi > gamma_lo)) throw ValidationError("geometry: empty Gamma arc");
    if (gamma_hi - gamma_lo > kTwoPi + 1e-12)
        throw ValidationError("geometry: Gamma arc longer than the full circle");
    if (!full_circle()) {
        double margin_lo = gamma_tilde_lo - gamma_lo;
        double margin_hi = gamma_hi - gamma_tilde_hi;
        if (!(gamma_tilde_hi > gamma_tilde_lo))
            throw ValidationError("geometry: empty GammaTilde arc");
        if (margin_lo <= 0.0 || margin_hi <= 0.0)
            throw ValidationError("geometry: GammaTilde must be compactly contained in Gamma");
    }
}

double SurfaceDesc::param_of(Vec2 p) const {
    if (geometry.kind == DomainGeometry::Kind::HalfSpace) return p.x;
    double ang = std::atan2(p.y - geometry.center.y, p.x - geometry.center.x);
    double lo = geometry.gamma_lo;
    double rel = ang - lo;
    while (rel < 0.0) rel += kTwoPi;
    while (rel >= kTwoPi) rel -= kTwoPi;
    if (!periodic) {
        // Identify points slightly past the end of the arc with the arc edge.
        double span = geometry.gamma_hi - geometry.gamma_lo;
        if (rel > span) rel = (rel - span < kTwoPi - rel) ? span : 0.0;
    }
    return rel * geometry.radius;
}

Vec2 SurfaceDesc::position_of(double w) const {
    if (geometry.kind == DomainGeometry::Kind::HalfSpace) return {w, 0.0};
    double ang = geometry.gamma_lo + w / geometry.radius;
    return geometry.center + Vec2{std::cos(ang), std::sin(ang)} * geometry.radius;
}

SurfaceDesc make_surface(const DomainGeometry& geom, size_t n_samples) {
    if (n_samples < 2) throw ValidationError("surface: need at least 2 samples");
    SurfaceDesc s;
    s.geometry = geom;
    s.param.resize(n_samples);
    s.position.resize(n_samples);
    s.normal.resize(n_samples);
    s.tangent.resize(n_samples);
    if (geom.kind == DomainGeometry::Kind::HalfSpace) {
        s.periodic = false;
        s.spacing = (geom.surface_hi - geom.surface_lo) / static_cast<double>(n_samples - 1);
        for (size_t j = 0; j < n_samples; ++j) {
            double w = geom.surface_lo + s.spacing * static_cast<double>(j);
            s.param[j] = w;
            s.position[j] = {w, 0.0};
            s.normal[j] = {0.0, 1.0};
            s.tangent[j] = {1.0, 0.0};
        }
        return s;
    }
    s.periodic = geom.full_circle();
    double span = geom.gamma_hi - geom.gamma_lo;
    double dang = s.periodic ? span / static_cast<double>(n_samples)
                             : span / static_cast<double>(n_samples - 1);
    s.spacing = dang * geom.radius;
    for (size_t j = 0; j < n_samples; ++j) {
        double ang = geom.gamma_lo + dang * static_cast<double>(j);
        Vec2 n{std::cos(ang), std::sin(ang)};
        s.param[j] = dang * static_cast<double>(j) * geom.radius;
        s.position[j] = geom.center + n * geom.radius;
        s.normal[j] = n;
        s.tangent[j] = perp(n);
    }
    return s;
}

}  // namespace tat
