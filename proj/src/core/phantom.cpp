#include "core/phantom.hpp"

#include <cmath>
#include <sstream>

namespace tat {

namespace {

double disk_value(const PhantomPrimitive& p, Vec2 x) {
    double d = norm(x - p.center);
    if (p.smooth_width <= 0.0) return d < p.radius ? p.amplitude : 0.0;
    return p.amplitude * smooth_ramp((p.radius - d) / p.smooth_width + 0.5);
}

bool point_in_polygon(const std::vector<Vec2>& vs, Vec2 p) {
    bool inside = false;
    size_t n = vs.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        bool crosses = (vs[i].y > p.y) != (vs[j].y > p.y);
        if (crosses) {
            double xint = vs[j].x + (vs[i].x - vs[j].x) * (p.y - vs[j].y) / (vs[i].y - vs[j].y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double polygon_signed_area(const std::vector<Vec2>& vs) {
    double a = 0.0;
    size_t n = vs.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++)
        a += vs[j].x * vs[i].y - vs[i].x * vs[j].y;
    return 0.5 * a;
}

void check_in_omega(const DomainGeometry& geom, Vec2 p, double pad, const std::string& what) {
    if (!geom.in_omega(p, pad)) {
        std::ostringstream os;
        os << what << " at " << format_vec(p) << " escapes the region of interest";
        throw ValidationError(os.str());
    }
}

}  // namespace

Phantom make_phantom(const std::vector<PhantomPrimitive>& spec, const Grid& grid,
                     const DomainGeometry& geom, size_t edge_samples_per_primitive) {
    Phantom out;
    out.field = ScalarField(grid);
    for (size_t pi = 0; pi < spec.size(); ++pi) {
        const auto& p = spec[pi];
        if (p.type == "disk") {
            if (!(p.radius > 0.0)) throw ValidationError("disk radius must be > 0");
            check_in_omega(geom, p.center, p.radius + p.smooth_width, "disk");
            for (size_t ix = 0; ix < grid.nx(); ++ix)
                for (size_t iy = 0; iy < grid.ny(); ++iy)
                    out.field.at(ix, iy) += disk_value(p, grid.node2(ix, iy));
            double dang = kTwoPi / static_cast<double>(edge_samples_per_primitive);
            for (size_t k = 0; k < edge_samples_per_primitive; ++k) {
                double ang = dang * (static_cast<double>(k) + 0.5);
                Vec2 n{std::cos(ang), std::sin(ang)};
                out.edges.push_back({p.center + n * p.radius, n, p.radius * dang, pi});
            }
        } else if (p.type == "polygon") {
            if (p.vertices.size() < 3) throw ValidationError("polygon needs >= 3 vertices");
            for (const auto& v : p.vertices) check_in_omega(geom, v, 0.0, "polygon vertex");
            double orient = polygon_signed_area(p.vertices) >= 0.0 ? 1.0 : -1.0;
            for (size_t ix = 0; ix < grid.nx(); ++ix)
                for (size_t iy = 0; iy < grid.ny(); ++iy)
                    if (point_in_polygon(p.vertices, grid.node2(ix, iy)))
                        out.field.at(ix, iy) += p.amplitude;
            size_t n = p.vertices.size();
            double total_len = 0.0;
            for (size_t i = 0; i < n; ++i)
                total_len += norm(p.vertices[(i + 1) % n] - p.vertices[i]);
            for (size_t i = 0; i < n; ++i) {
                Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n];
                double len = norm(b - a);
                // outward normal for counterclockwise orientation is -perp
                Vec2 nrm = normalized(perp(b - a)) * (-orient);
                auto count = std::max<size_t>(
                    1, static_cast<size_t>(std::round(
                           static_cast<double>(edge_samples_per_primitive) * len / total_len)));
                for (size_t k = 0; k < count; ++k) {
                    double s = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
                    out.edges.push_back({a + (b - a) * s, nrm, len / static_cast<double>(count), pi});
                }
            }
        } else {
            throw ValidationError("unknown phantom primitive: " + p.type);
        }
    }
    out.field.check_finite("phantom");
    return out;
}

ScalarField mollify(const ScalarField& f, double sigma_cells) {
    if (sigma_cells <= 0.0) return f;
    // Separable truncated Gaussian; kernel normalized to unit sum.
    int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
    std::vector<double> k(static_cast<size_t>(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        double v = std::exp(-0.5 * (i / sigma_cells) * (i / sigma_cells));
        k[static_cast<size_t>(i + half)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    const Grid& g = f.grid;
    ScalarField tmp(g), out(g);
    auto nx = static_cast<long>(g.nx()), ny = static_cast<long>(g.ny());
    for (long ix = 0; ix < nx; ++ix)
        for (long iy = 0; iy < ny; ++iy) {
            double acc = 0.0;
            for (int s = -half; s <= half; ++s) {
                long j = std::clamp(iy + s, 0L, ny - 1);
                acc += k[static_cast<size_t>(s + half)] *
                       f.at(static_cast<size_t>(ix), static_cast<size_t>(j));
            }
            tmp.at(static_cast<size_t>(ix), static_cast<size_t>(iy)) = acc;
        }
    for (long ix = 0; ix < nx; ++ix)
        for (long iy = 0; iy < ny; ++iy) {
            double acc = 0.0;
            for (int s = -half; s <= half; ++s) {
                long j = std::clamp(ix + s, 0L, nx - 1);
                acc += k[static_cast<size_t>(s + half)] *
                       tmp.at(static_cast<size_t>(j), static_cast<size_t>(iy));
            }
            out.at(static_cast<size_t>(ix), static_cast<size_t>(iy)) = acc;
        }
    return out;
}

}  // namespace tat
