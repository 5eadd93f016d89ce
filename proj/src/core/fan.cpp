#include "core/fan.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tat {

namespace {

struct DepositSums {
    double w = 0.0, wphi = 0.0, wamp = 0.0, wxix = 0.0, wxiy = 0.0, wtau = 0.0;
    int count = 0;
};

inline double deposit_weight(double d, double R) {
    double u = 1.0 - (d / R) * (d / R);
    if (u <= 0.0) return 0.0;
    double soft = 0.05 * R;
    return u * u / (d * d + soft * soft);
}

// Seed lattice covering every point within `reach` of the measured surface
// manifold; points further away can never deposit.
std::vector<Vec2> seed_lattice(const DomainGeometry& geom, const SurfaceDesc& surface,
                               double reach, double h_fan) {
    std::vector<Vec2> seeds;
    if (geom.kind == DomainGeometry::Kind::HalfSpace) {
        double lo = geom.surface_lo - reach, hi = geom.surface_hi + reach;
        auto nx = static_cast<size_t>(std::ceil((hi - lo) / h_fan));
        auto ny = static_cast<size_t>(std::ceil(2.0 * reach / h_fan));
        seeds.reserve(nx * ny);
        for (size_t i = 0; i < nx; ++i)
            for (size_t j = 0; j < ny; ++j) {
                Vec2 y{lo + (static_cast<double>(i) + 0.5) * h_fan,
                       -reach + (static_cast<double>(j) + 0.5) * h_fan};
                // distance to the measured segment
                double dx = std::max({geom.surface_lo - y.x, 0.0, y.x - geom.surface_hi});
                if (std::hypot(dx, y.y) <= reach) seeds.push_back(y);
            }
        return seeds;
    }
    double r_out = geom.radius + reach;
    double r_in = std::max(0.0, geom.radius - reach);
    auto n = static_cast<size_t>(std::ceil(2.0 * r_out / h_fan));
    seeds.reserve(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Vec2 y = geom.center + Vec2{-r_out + (static_cast<double>(i) + 0.5) * h_fan,
                                        -r_out + (static_cast<double>(j) + 0.5) * h_fan};
            double r = norm(y - geom.center);
            if (r > r_out || r < r_in) continue;
            if (!surface.periodic) {
                // prune by arc distance to Gamma when only a partial arc is read
                double ang = std::atan2(y.y - geom.center.y, y.x - geom.center.x);
                double rel = ang - geom.gamma_lo;
                while (rel < 0.0) rel += kTwoPi;
                while (rel >= kTwoPi) rel -= kTwoPi;
                double span = geom.gamma_hi - geom.gamma_lo;
                double arc_gap = rel <= span ? 0.0
                                             : std::min(rel - span, kTwoPi - rel) * geom.radius;
                if (arc_gap > reach) continue;
            }
            seeds.push_back(y);
        }
    return seeds;
}

// Surface sample indices within Euclidean distance R of p.
void indices_near(const SurfaceDesc& s, Vec2 p, double R, std::vector<size_t>& out) {
    out.clear();
    double w = s.param_of(p);
    double pad = R * 1.5 + s.spacing;
    auto lo_f = std::floor((w - s.param.front() - pad) / s.spacing);
    auto hi_f = std::ceil((w - s.param.front() + pad) / s.spacing);
    auto n = static_cast<long>(s.size());
    if (s.periodic) {
        long range = static_cast<long>(hi_f - lo_f);
        for (long d = 0; d <= range; ++d) {
            long j = (static_cast<long>(lo_f) + d) % n;
            if (j < 0) j += n;
            if (norm(s.position[static_cast<size_t>(j)] - p) <= R)
                out.push_back(static_cast<size_t>(j));
        }
    } else {
        long lo = std::max(0L, static_cast<long>(lo_f));
        long hi = std::min(n - 1, static_cast<long>(hi_f));
        for (long j = lo; j <= hi; ++j)
            if (norm(s.position[static_cast<size_t>(j)] - p) <= R)
                out.push_back(static_cast<size_t>(j));
    }
}

}  // namespace

PhaseAmpTable build_phase_table(int sign, const SoundSpeed& cs, const DomainGeometry& geom,
                                const SurfaceDesc& surface, const std::vector<double>& times,
                                size_t n_dirs, FanOptions opts) {
    if (times.empty()) throw ValidationError("phase table: empty time axis");
    double T = std::max(std::abs(times.front()), std::abs(times.back()));
    double h_fan = opts.fan_spacing > 0.0 ? opts.fan_spacing
                                          : 2.0 * cs.field().grid.min_spacing();
    double R_dep = opts.interp_radius_factor * h_fan;
    double reach = cs.c_max() * T + 3.0 * R_dep;

    PhaseAmpTable table(sign, surface, times, n_dirs);
    std::vector<Vec2> seeds = seed_lattice(geom, surface, reach, h_fan);
    size_t n_surf = surface.size();
    size_t n_times = times.size();
    size_t center = 0;
    for (size_t m = 1; m < n_times; ++m)
        if (std::abs(times[m]) < std::abs(times[center])) center = m;

    std::exception_ptr conj_error;
    std::mutex conj_mutex;

    parallel_for(n_dirs, [&](size_t bin) {
        double ang = kTwoPi * static_cast<double>(bin) / static_cast<double>(n_dirs);
        Vec2 eta{std::cos(ang), std::sin(ang)};
        std::vector<DepositSums> acc(n_surf * n_times);
        std::vector<size_t> near;
        Vec2 current_seed{0.0, 0.0};

        auto deposit = [&](RayIntegrator& ri, size_t m) {
            Vec2 x = ri.x();
            if (std::abs(geom.boundary_defining(x)) > R_dep) return;
            indices_near(surface, x, R_dep, near);
            if (near.empty()) return;
            if (auto degen = ri.first_degeneracy())
                throw ConjugatePointError(*degen, current_seed, eta);
            Mat2 H = ri.phase_hessian();
            Vec2 xi = ri.xi();
            double phi0 = ri.phi();
            double a0 = ri.amplitude();
            double tau = ri.tau();
            for (size_t j : near) {
                Vec2 d = surface.position[j] - x;
                double w = deposit_weight(norm(d), R_dep);
                if (w <= 0.0) continue;
                Vec2 Hd = H * d;
                DepositSums& s = acc[j * n_times + m];
                s.w += w;
                s.wphi += w * (phi0 + dot(xi, d) + 0.5 * dot(d, Hd));
                s.wamp += w * a0;
                s.wxix += w * (xi.x + Hd.x);
                s.wxiy += w * (xi.y + Hd.y);
                s.wtau += w * tau;
                s.count += 1;
            }
        };

        try {
            for (const Vec2& y : seeds) {
                current_seed = y;
                for (int side = 0; side < 2; ++side) {
                    RayIntegrator ri(cs, y, eta, sign, opts.ray);
                    if (side == 0) deposit(ri, center);
                    if (side == 0) {
                        for (size_t m = center + 1; m < n_times && !ri.truncated(); ++m) {
                            ri.advance_to(times[m]);
                            deposit(ri, m);
                        }
                    } else {
                        for (size_t m = center; m-- > 0 && !ri.truncated();) {
                            ri.advance_to(times[m]);
                            deposit(ri, m);
                        }
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(conj_mutex);
            if (!conj_error) conj_error = std::current_exception();
            return;
        }

        for (size_t j = 0; j < n_surf; ++j) {
            Vec2 tan = surface.tangent[j];
            Vec2 nrm = surface.normal[j];
            for (size_t m = 0; m < n_times; ++m) {
                const DepositSums& s = acc[j * n_times + m];
                size_t i = table.idx(j, m, bin);
                if (s.count < static_cast<int>(opts.min_rays_per_entry) || !(s.w > 0.0))
                    continue;
                double inv = 1.0 / s.w;
                table.phi[i] = s.wphi * inv;
                table.amp[i] = s.wamp * inv;
                Vec2 xi{s.wxix * inv, s.wxiy * inv};
                table.grad_w[i] = static_cast<float>(dot(xi, tan));
                table.grad_n[i] = static_cast<float>(dot(xi, nrm));
                table.dphi_dt[i] = static_cast<float>(s.wtau * inv);
                table.valid[i] = 1;
            }
        }
    }, opts.n_threads);

    if (conj_error) std::rethrow_exception(conj_error);
    if (table.coverage() < opts.coverage_threshold) table.partial = true;
    for (double v : table.phi)
        if (!std::isfinite(v)) throw Error("phase table: non-finite phase (step failure)");
    return table;
}

VolumeProbe build_volume_probe(int sign, const SoundSpeed& cs, Vec2 eta_hat, const Grid& box,
                               const std::vector<double>& times, FanOptions opts) {
    VolumeProbe probe;
    probe.box = box;
    probe.times = times;
    probe.eta_hat = eta_hat;
    probe.sign = sign;
    size_t n = box.size() * times.size();
    probe.phi.assign(n, 0.0);
    probe.a.assign(n, 0.0);
    probe.xix.assign(n, 0.0);
    probe.xiy.assign(n, 0.0);
    probe.tau.assign(n, 0.0);
    probe.hxx.assign(n, 0.0);
    probe.hxy.assign(n, 0.0);
    probe.hyy.assign(n, 0.0);
    probe.valid.assign(n, 0);

    double T = 0.0;
    for (double t : times) T = std::max(T, std::abs(t));
    double h_fan = opts.fan_spacing > 0.0 ? opts.fan_spacing : box.min_spacing();
    double R_dep = opts.interp_radius_factor * h_fan;
    double reach = cs.c_max() * T + 3.0 * R_dep;

    Vec2 lo = box.lower2() - Vec2{reach, reach};
    Vec2 hi = box.upper2() + Vec2{reach, reach};
    auto nsx = static_cast<size_t>(std::ceil((hi.x - lo.x) / h_fan));
    auto nsy = static_cast<size_t>(std::ceil((hi.y - lo.y) / h_fan));

    struct Sums {
        double w = 0, wphi = 0, wa = 0, wxx = 0, wxy = 0, wtau = 0, whxx = 0, whxy = 0, whyy = 0;
        int count = 0;
    };
    std::vector<Sums> acc(n);

    std::exception_ptr err;
    std::mutex err_mutex;
    size_t n_chunks = std::min<size_t>(16, nsx);
    std::vector<std::vector<Sums>> chunk_acc(n_chunks);

    parallel_for(n_chunks, [&](size_t chunk) {
        std::vector<Sums> local(n);
        try {
            for (size_t i = chunk; i < nsx; i += n_chunks) {
                for (size_t j = 0; j < nsy; ++j) {
                    Vec2 y{lo.x + (static_cast<double>(i) + 0.5) * h_fan,
                           lo.y + (static_cast<double>(j) + 0.5) * h_fan};
                    for (int side = 0; side < 2; ++side) {
                        RayIntegrator ri(cs, y, eta_hat, sign, opts.ray);
                        // times may be all-positive; walk them in |t| order per side
                        std::vector<size_t> order;
                        for (size_t m = 0; m < times.size(); ++m)
                            if ((side == 0 && times[m] >= 0.0) || (side == 1 && times[m] < 0.0))
                                order.push_back(m);
                        if (side == 0)
                            std::sort(order.begin(), order.end(),
                                      [&](size_t a, size_t b) { return times[a] < times[b]; });
                        else
                            std::sort(order.begin(), order.end(),
                                      [&](size_t a, size_t b) { return times[a] > times[b]; });
                        for (size_t m : order) {
                            if (ri.truncated()) break;
                            ri.advance_to(times[m]);
                            Vec2 x = ri.x();
                            if (!box.contains2(x, R_dep)) continue;
                            if (auto degen = ri.first_degeneracy())
                                throw ConjugatePointError(*degen, y, eta_hat);
                            Mat2 H = ri.phase_hessian();
                            Vec2 xi = ri.xi();
                            // box nodes within the deposit radius
                            auto ix0 = static_cast<long>(
                                std::floor((x.x - R_dep - box.origin[0]) / box.spacing[0]));
                            auto ix1 = static_cast<long>(
                                std::ceil((x.x + R_dep - box.origin[0]) / box.spacing[0]));
                            auto iy0 = static_cast<long>(
                                std::floor((x.y - R_dep - box.origin[1]) / box.spacing[1]));
                            auto iy1 = static_cast<long>(
                                std::ceil((x.y + R_dep - box.origin[1]) / box.spacing[1]));
                            ix0 = std::max(ix0, 0L);
                            iy0 = std::max(iy0, 0L);
                            ix1 = std::min(ix1, static_cast<long>(box.nx()) - 1);
                            iy1 = std::min(iy1, static_cast<long>(box.ny()) - 1);
                            for (long ix = ix0; ix <= ix1; ++ix)
                                for (long iy = iy0; iy <= iy1; ++iy) {
                                    Vec2 node = box.node2(static_cast<size_t>(ix),
                                                          static_cast<size_t>(iy));
                                    Vec2 d = node - x;
                                    double w = deposit_weight(norm(d), R_dep);
                                    if (w <= 0.0) continue;
                                    Vec2 Hd = H * d;
                                    size_t node_i = box.index2(static_cast<size_t>(ix),
                                                               static_cast<size_t>(iy));
                                    Sums& s = local[node_i * times.size() + m];
                                    s.w += w;
                                    s.wphi += w * (ri.phi() + dot(xi, d) + 0.5 * dot(d, Hd));
                                    s.wa += w * ri.amplitude();
                                    s.wxx += w * (xi.x + Hd.x);
                                    s.wxy += w * (xi.y + Hd.y);
                                    s.wtau += w * ri.tau();
                                    s.whxx += w * H.a;
                                    s.whxy += w * H.b;
                                    s.whyy += w * H.d;
                                    s.count += 1;
                                }
                        }
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
        }
        chunk_acc[chunk] = std::move(local);
    });
    if (err) std::rethrow_exception(err);
    for (auto& local : chunk_acc)
        for (size_t i = 0; i < n; ++i) {
            acc[i].w += local[i].w;
            acc[i].wphi += local[i].wphi;
            acc[i].wa += local[i].wa;
            acc[i].wxx += local[i].wxx;
            acc[i].wxy += local[i].wxy;
            acc[i].wtau += local[i].wtau;
            acc[i].whxx += local[i].whxx;
            acc[i].whxy += local[i].whxy;
            acc[i].whyy += local[i].whyy;
            acc[i].count += local[i].count;
        }
    for (size_t i = 0; i < n; ++i) {
        if (acc[i].count < static_cast<int>(opts.min_rays_per_entry) || !(acc[i].w > 0.0))
            continue;
        double inv = 1.0 / acc[i].w;
        probe.phi[i] = acc[i].wphi * inv;
        probe.a[i] = acc[i].wa * inv;
        probe.xix[i] = acc[i].wxx * inv;
        probe.xiy[i] = acc[i].wxy * inv;
        probe.tau[i] = acc[i].wtau * inv;
        probe.hxx[i] = acc[i].whxx * inv;
        probe.hxy[i] = acc[i].whxy * inv;
        probe.hyy[i] = acc[i].whyy * inv;
        probe.valid[i] = 1;
    }
    return probe;
}

}  // namespace tat
