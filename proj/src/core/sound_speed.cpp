#include "core/sound_speed.hpp"

#include <cmath>
#include <sstream>

namespace tat {

namespace {

// w(s) = (1-s)^6 on s in [0,1]; profile value is amplitude * w(|x-x0|^2/R^2).
inline double prof(double s) { double u = 1.0 - s; return u * u * u * u * u * u; }
inline double prof_d(double s) { double u = 1.0 - s; return -6.0 * u * u * u * u * u; }
inline double prof_dd(double s) { double u = 1.0 - s; return 30.0 * u * u * u * u; }

}  // namespace

SoundSpeed::SoundSpeed(std::vector<SpeedBump> bumps, Grid grid, double bound_M,
                       std::string support_desc)
    : bumps_(std::move(bumps)), bound_M_(bound_M), support_desc_(std::move(support_desc)) {
    field_ = ScalarField(std::move(grid));
    const Grid& g = field_.grid;
    for (size_t ix = 0; ix < g.nx(); ++ix)
        for (size_t iy = 0; iy < g.ny(); ++iy)
            field_.at(ix, iy) = c(g.node2(ix, iy));
    c_max_ = 1.0;
    c_min_ = 1.0;
    for (const auto& b : bumps_) {
        c_max_ = std::max(c_max_, 1.0 + std::max(0.0, b.amplitude));
        c_min_ = std::min(c_min_, 1.0 + std::min(0.0, b.amplitude));
    }
}

double SoundSpeed::c(Vec2 p) const {
    double v = 1.0;
    for (const auto& b : bumps_) {
        double s = norm2(p - b.center) / (b.radius * b.radius);
        if (s < 1.0) v += b.amplitude * prof(s);
    }
    return v;
}

Vec2 SoundSpeed::grad_c(Vec2 p) const {
    Vec2 g{0.0, 0.0};
    for (const auto& b : bumps_) {
        double r2 = b.radius * b.radius;
        Vec2 d = p - b.center;
        double s = norm2(d) / r2;
        if (s < 1.0) g += d * (b.amplitude * prof_d(s) * 2.0 / r2);
    }
    return g;
}

Vec2 SoundSpeed::grad_c2(Vec2 p) const {
    return grad_c(p) * (2.0 * c(p));
}

Mat2 SoundSpeed::hess_c2(Vec2 p) const {
    // hess(c^2) = 2 (grad c (x) grad c + c hess c)
    Vec2 gc = grad_c(p);
    Mat2 hc = Mat2::zero();
    for (const auto& b : bumps_) {
        double r2 = b.radius * b.radius;
        Vec2 d = p - b.center;
        double s = norm2(d) / r2;
        if (s < 1.0) {
            hc += Mat2::outer(d, d) * (b.amplitude * prof_dd(s) * 4.0 / (r2 * r2));
            hc += Mat2::identity() * (b.amplitude * prof_d(s) * 2.0 / r2);
        }
    }
    return (Mat2::outer(gc, gc) + hc * c(p)) * 2.0;
}

bool SoundSpeed::point_uniform(Vec2 p, double margin) const {
    for (const auto& b : bumps_)
        if (norm(p - b.center) < b.radius + margin) return false;
    return true;
}

bool SoundSpeed::segment_uniform(Vec2 p, Vec2 dir_unit, double len, double margin) const {
    for (const auto& b : bumps_) {
        Vec2 d = b.center - p;
        double along = std::clamp(dot(d, dir_unit), 0.0, len);
        Vec2 closest = p + dir_unit * along;
        if (norm(b.center - closest) < b.radius + margin) return false;
    }
    return true;
}

void SoundSpeed::check_invariants(const DomainGeometry& geom, double exterior_tol) const {
    double inv_M = 1.0 / bound_M_;
    const Grid& g = field_.grid;
    double max_lap = 0.0;
    for (size_t ix = 0; ix < g.nx(); ++ix) {
        for (size_t iy = 0; iy < g.ny(); ++iy) {
            double v = field_.at(ix, iy);
            if (!(v > inv_M && v < bound_M_)) {
                std::ostringstream os;
                os << "sound speed " << v << " at " << format_vec(g.node2(ix, iy))
                   << " violates bounds (1/M, M) with M=" << bound_M_;
                throw ValidationError(os.str());
            }
            Vec2 p = g.node2(ix, iy);
            if (!geom.in_omega(p) && std::abs(v - 1.0) > exterior_tol)
                throw ValidationError("sound speed differs from 1 outside the region at " +
                                      format_vec(p));
            if (ix > 0 && ix + 1 < g.nx() && iy > 0 && iy + 1 < g.ny()) {
                double lap = (field_.at(ix - 1, iy) + field_.at(ix + 1, iy) - 2 * v) /
                                 (g.spacing[0] * g.spacing[0]) +
                             (field_.at(ix, iy - 1) + field_.at(ix, iy + 1) - 2 * v) /
                                 (g.spacing[1] * g.spacing[1]);
                max_lap = std::max(max_lap, std::abs(lap));
            }
        }
    }
    // Discrete smoothness: the bump profile keeps |lap c| <= C amp / R^2.
    double bound = 0.0;
    for (const auto& b : bumps_)
        bound += 60.0 * std::abs(b.amplitude) / (b.radius * b.radius);
    if (max_lap > bound + 1e-9)
        throw ValidationError("sound speed discrete Laplacian exceeds the smoothness bound");
}

SoundSpeed make_sound_speed(const SoundSpeedModel& model, const Grid& grid,
                            const DomainGeometry& geom) {
    std::vector<SpeedBump> bumps;
    if (model.name == "constant") {
        // c == 1 everywhere
    } else if (model.name == "radial-bump" || model.name == "multi-bump") {
        bumps = model.bumps;
        if (model.name == "radial-bump" && bumps.size() != 1)
            throw ValidationError("radial-bump model expects exactly one bump");
        if (bumps.empty()) throw ValidationError(model.name + " model expects bumps");
    } else {
        throw ValidationError("unknown sound speed model: " + model.name);
    }
    for (const auto& b : bumps) {
        if (!(b.radius > 0.0)) throw ValidationError("bump radius must be > 0");
        double a = 1.0 + b.amplitude;
        if (!(a > 1.0 / model.bound_M && a < model.bound_M))
            throw ValidationError("bump amplitude violates the (1/M, M) speed bounds");
        // support must stay strictly inside the region of interest
        double clearance;
        if (geom.kind == DomainGeometry::Kind::HalfSpace)
            clearance = -b.center.y - b.radius;
        else
            clearance = geom.radius - (norm(b.center - geom.center) + b.radius);
        if (clearance <= 0.0) {
            std::ostringstream os;
            os << "bump at " << format_vec(b.center) << " radius " << b.radius
               << " escapes the region of interest (clearance " << clearance << ")";
            throw ValidationError(os.str());
        }
    }
    std::string desc = geom.kind == DomainGeometry::Kind::HalfSpace
                           ? "half-space {y<0}"
                           : "disk about " + format_vec(geom.center);
    SoundSpeed c(std::move(bumps), grid, model.bound_M, desc);
    c.check_invariants(geom);
    return c;
}

}  // namespace tat
