#include "core/visibility.hpp"

#include <algorithm>
#include <cmath>

namespace tat {

size_t ConeMask::bin_of(Vec2 d) const {
    double ang = std::atan2(d.y, d.x);
    if (ang < 0.0) ang += kTwoPi;
    double fb = ang * static_cast<double>(n_dirs) / kTwoPi;
    auto bin = static_cast<size_t>(std::llround(fb));
    return bin % n_dirs;
}

double ConeMask::weight_at(Vec2 p, Vec2 d) const {
    double fx = (p.x - grid.origin[0]) / grid.spacing[0];
    double fy = (p.y - grid.origin[1]) / grid.spacing[1];
    auto ix = static_cast<long>(std::llround(fx));
    auto iy = static_cast<long>(std::llround(fy));
    ix = std::clamp(ix, 0L, static_cast<long>(grid.nx()) - 1);
    iy = std::clamp(iy, 0L, static_cast<long>(grid.ny()) - 1);
    size_t node = grid.index2(static_cast<size_t>(ix), static_cast<size_t>(iy));
    return weight(node, bin_of(d));
}

double glancing_taper(double normal_frac, const VisibilityOptions& opts) {
    return smooth_ramp((normal_frac - opts.glancing_threshold) / opts.angular_margin);
}

bool crossing_on_measured(const DomainGeometry& geom, double w) {
    if (geom.kind == DomainGeometry::Kind::HalfSpace)
        return w >= geom.surface_lo && w <= geom.surface_hi;
    if (geom.full_circle()) return true;
    double lo = (geom.gamma_tilde_lo - geom.gamma_lo) * geom.radius;
    double hi = (geom.gamma_tilde_hi - geom.gamma_lo) * geom.radius;
    return w >= lo && w <= hi;
}

void sweep_crossings(const Grid& grid, size_t n_dirs, const SoundSpeed& cs,
                     const DomainGeometry& geom, double T, const std::vector<int>& signs,
                     const std::function<void(size_t, size_t, int, const std::vector<CrossingRecord>&)>& cb,
                     RayOptions ray_opts) {
    parallel_for(grid.size(), [&](size_t node) {
        Vec2 y = grid.node2_flat(node);
        for (size_t bin = 0; bin < n_dirs; ++bin) {
            double ang = kTwoPi * static_cast<double>(bin) / static_cast<double>(n_dirs);
            Vec2 eta{std::cos(ang), std::sin(ang)};
            for (int sign : signs) {
                auto crossings = endpoint_crossings(y, eta, sign, cs, geom, T, ray_opts);
                cb(node, bin, sign, crossings);
            }
        }
    });
}

ConeMask classify_visibility(const Grid& grid, size_t n_dirs, const SoundSpeed& cs,
                             const DomainGeometry& geom, const std::vector<int>& signs,
                             VisibilityOptions opts) {
    double T = opts.t_horizon > 0.0 ? opts.t_horizon : geom.t_max;
    ConeMask mask(grid, n_dirs);
    if (T <= 0.0) return mask;
    RayOptions ropts;
    sweep_crossings(grid, n_dirs, cs, geom, T, signs,
                    [&](size_t node, size_t bin, int, const std::vector<CrossingRecord>& cr) {
                        double w = mask.weight(node, bin);
                        for (const auto& c : cr) {
                            if (opts.restrict_to_measured && !crossing_on_measured(geom, c.w))
                                continue;
                            w = std::max(w, glancing_taper(c.normal_frac, opts));
                        }
                        mask.set(node, bin, w);
                    },
                    ropts);
    return mask;
}

InjectivityReport check_endpoint_injectivity(Vec2 seed, const std::vector<Vec2>& dirs, int sign,
                                             const SoundSpeed& cs, const DomainGeometry& geom,
                                             double T, double margin, RayOptions ray_opts) {
    InjectivityReport rep;
    struct Endpoint {
        size_t dir_index;
        double w, t, tau;
        Vec2 xi_hat;
    };
    std::vector<Endpoint> eps;
    for (size_t i = 0; i < dirs.size(); ++i) {
        auto cr = endpoint_crossings(seed, normalized(dirs[i]), sign, cs, geom, T, ray_opts);
        for (const auto& c : cr) {
            if (c.glancing) continue;
            eps.push_back({i, c.w, c.t, c.tau, c.xi / norm(c.xi)});
        }
        if (cr.empty()) ++rep.n_no_crossing;
    }
    rep.n_endpoints = eps.size();
    double scale_w = geom.kind == DomainGeometry::Kind::HalfSpace
                         ? geom.surface_hi - geom.surface_lo
                         : kTwoPi * geom.radius;
    double min_sep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < eps.size(); ++i) {
        for (size_t j = i + 1; j < eps.size(); ++j) {
            // The endpoint data of the canonical relation is (x', t, xi', tau);
            // two crossings at the same (x', t) with the same tangential
            // frequency direction violate Lemma-type injectivity.
            double d = std::abs(eps[i].w - eps[j].w) / scale_w;
            d = std::max(d, std::abs(eps[i].t - eps[j].t) / T);
            double cosang = std::clamp(dot(eps[i].xi_hat, eps[j].xi_hat), -1.0, 1.0);
            d = std::max(d, std::acos(cosang) / kPi);
            double tmax = std::max(std::abs(eps[i].tau), std::abs(eps[j].tau));
            d = std::max(d, std::abs(eps[i].tau - eps[j].tau) / tmax);
            if (d < min_sep) min_sep = d;
            if (d < margin) rep.collisions.emplace_back(eps[i].dir_index, eps[j].dir_index);
        }
    }
    rep.min_separation = eps.size() > 1 ? min_sep : 0.0;
    rep.pass = rep.collisions.empty() && eps.size() > 1;
    return rep;
}

}  // namespace tat
