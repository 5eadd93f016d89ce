#include "core/wave.hpp"

#include <algorithm>
#include <cmath>

#include "core/fft_utils.hpp"

namespace tat {

namespace {

struct Stepper {
    Grid big;
    std::vector<double> c2;
    std::vector<double> u_prev, u_curr, u_next, lap;
    double dt = 0.0;
    double t = 0.0;
    int n_threads = 0;

    size_t nx() const { return big.nx(); }
    size_t ny() const { return big.ny(); }

    void laplacian(const std::vector<double>& u) {
        double ix2 = 1.0 / (12.0 * big.spacing[0] * big.spacing[0]);
        double iy2 = 1.0 / (12.0 * big.spacing[1] * big.spacing[1]);
        size_t n1 = ny();
        parallel_for(nx() - 4, [&](size_t r) {
            size_t i = r + 2;
            const double* u0 = u.data() + i * n1;
            const double* um1 = u0 - n1;
            const double* um2 = u0 - 2 * n1;
            const double* up1 = u0 + n1;
            const double* up2 = u0 + 2 * n1;
            double* out = lap.data() + i * n1;
            for (size_t j = 2; j + 2 < n1; ++j) {
                double dxx = (-um2[j] + 16.0 * um1[j] - 30.0 * u0[j] + 16.0 * up1[j] - up2[j]) * ix2;
                double dyy =
                    (-u0[j - 2] + 16.0 * u0[j - 1] - 30.0 * u0[j] + 16.0 * u0[j + 1] - u0[j + 2]) *
                    iy2;
                out[j] = dxx + dyy;
            }
        }, n_threads);
    }

    void first_step() {
        laplacian(u_prev);
        for (size_t i = 0; i < u_curr.size(); ++i)
            u_curr[i] = u_prev[i] + 0.5 * dt * dt * c2[i] * lap[i];
        t = dt;
    }

    void step() {
        laplacian(u_curr);
        for (size_t i = 0; i < u_curr.size(); ++i)
            u_next[i] = 2.0 * u_curr[i] - u_prev[i] + dt * dt * c2[i] * lap[i];
        std::swap(u_prev, u_curr);
        std::swap(u_curr, u_next);
        t += dt;
    }

    // c-weighted energy of the (u_prev, u_curr) pair
    double energy() const {
        double e = 0.0;
        size_t n1 = ny();
        for (size_t i = 1; i + 1 < nx(); ++i)
            for (size_t j = 1; j + 1 < n1; ++j) {
                size_t id = i * n1 + j;
                double ut = (u_curr[id] - u_prev[id]) / dt;
                double ax = 0.5 * (u_curr[id] + u_prev[id]);
                double gx = 0.5 *
                            ((u_curr[id + n1] + u_prev[id + n1]) - (u_curr[id - n1] + u_prev[id - n1])) *
                            0.5 / big.spacing[0];
                double gy = 0.5 *
                            ((u_curr[id + 1] + u_prev[id + 1]) - (u_curr[id - 1] + u_prev[id - 1])) *
                            0.5 / big.spacing[1];
                (void)ax;
                e += ut * ut / (2.0 * c2[id]) + 0.5 * (gx * gx + gy * gy);
            }
        return e * big.spacing[0] * big.spacing[1];
    }

    double sample(Vec2 p) const {
        double fx = (p.x - big.origin[0]) / big.spacing[0];
        double fy = (p.y - big.origin[1]) / big.spacing[1];
        auto ix = static_cast<size_t>(std::clamp(fx, 0.0, static_cast<double>(nx() - 2)));
        auto iy = static_cast<size_t>(std::clamp(fy, 0.0, static_cast<double>(ny() - 2)));
        double ax = fx - static_cast<double>(ix), ay = fy - static_cast<double>(iy);
        size_t n1 = ny();
        const double* u = u_curr.data();
        return (1 - ax) * ((1 - ay) * u[ix * n1 + iy] + ay * u[ix * n1 + iy + 1]) +
               ax * ((1 - ay) * u[(ix + 1) * n1 + iy] + ay * u[(ix + 1) * n1 + iy + 1]);
    }
};

Grid enlarge(const Grid& g, double margin) {
    double h0 = g.spacing[0], h1 = g.spacing[1];
    auto m0 = static_cast<size_t>(std::ceil(margin / h0)) + 2;
    auto m1 = static_cast<size_t>(std::ceil(margin / h1)) + 2;
    return Grid({g.origin[0] - static_cast<double>(m0) * h0,
                 g.origin[1] - static_cast<double>(m1) * h1},
                {h0, h1}, {g.shape[0] + 2 * m0, g.shape[1] + 2 * m1});
}

Stepper make_stepper(const ScalarField& f, const SoundSpeed& cs, double T, double dt_out,
                     const WaveOptions& opts) {
    if (opts.cfl_factor > 0.9)
        throw ValidationError("wave: CFL factor must stay at or below 0.9; refusing to run");
    double h = f.grid.min_spacing();
    double dt_cfl = opts.cfl_factor * h / (cs.c_max() * std::sqrt(2.0));
    // hard stability bound of leapfrog + 4th-order 9-point Laplacian
    double dt_stab = std::sqrt(3.0 / 8.0) * h / cs.c_max();
    if (dt_cfl > dt_stab)
        throw ValidationError("wave: time step violates the scheme stability bound");
    Stepper st;
    st.n_threads = opts.n_threads;
    st.big = enlarge(f.grid, cs.c_max() * T + opts.extra_pad);
    st.c2.resize(st.big.size());
    for (size_t i = 0; i < st.big.nx(); ++i)
        for (size_t j = 0; j < st.big.ny(); ++j)
            st.c2[i * st.big.ny() + j] = cs.c2(st.big.node2(i, j));
    st.u_prev.assign(st.big.size(), 0.0);
    st.u_curr.assign(st.big.size(), 0.0);
    st.u_next.assign(st.big.size(), 0.0);
    st.lap.assign(st.big.size(), 0.0);
    // embed f (grids share spacing; origins differ by whole cells)
    auto off0 = static_cast<size_t>(
        std::llround((f.grid.origin[0] - st.big.origin[0]) / f.grid.spacing[0]));
    auto off1 = static_cast<size_t>(
        std::llround((f.grid.origin[1] - st.big.origin[1]) / f.grid.spacing[1]));
    for (size_t i = 0; i < f.grid.nx(); ++i)
        for (size_t j = 0; j < f.grid.ny(); ++j)
            st.u_prev[(i + off0) * st.big.ny() + (j + off1)] = f.at(i, j);
    // make dt divide the output step exactly
    auto n_sub = static_cast<size_t>(std::ceil(dt_out / dt_cfl - 1e-12));
    st.dt = dt_out / static_cast<double>(std::max<size_t>(1, n_sub));
    return st;
}

}  // namespace

WaveResult solve_forward(const ScalarField& f, const SoundSpeed& cs, double T,
                         const DomainGeometry& geom, const SurfaceDesc& surface,
                         const std::vector<double>& out_times, WaveOptions opts) {
    (void)geom;
    if (out_times.empty() || std::abs(out_times.front()) > 1e-12)
        throw ValidationError("wave: output times must start at 0");
    for (double t : out_times)
        if (t < 0.0 || t > T + 1e-9) throw ValidationError("wave: output time outside [0, T]");
    double dt_out = out_times.size() > 1 ? out_times[1] - out_times[0] : T;
    Stepper st = make_stepper(f, cs, T, dt_out, opts);

    WaveResult res;
    res.trace.surface = surface;
    res.trace.times = out_times;
    res.trace.values.assign(surface.size() * out_times.size(), 0.0);

    auto record = [&](size_t m) {
        for (size_t j = 0; j < surface.size(); ++j)
            res.trace.values[res.trace.idx(j, m)] = st.sample(surface.position[j]);
        if (opts.frame_stride > 0 && m % opts.frame_stride == 0) {
            ScalarField frame(f.grid);
            for (size_t i = 0; i < f.grid.nx(); ++i)
                for (size_t jj = 0; jj < f.grid.ny(); ++jj)
                    frame.at(i, jj) = st.sample(f.grid.node2(i, jj));
            res.frames.push_back(std::move(frame));
            res.frame_times.push_back(out_times[m]);
        }
    };

    // t = 0: u_curr is not defined yet; record from u_prev via a halfState
    st.u_curr = st.u_prev;  // both hold f at t=0 for sampling purposes
    record(0);
    st.first_step();
    double e0 = 0.0;
    size_t m_next = 1;
    auto total_steps = static_cast<size_t>(std::llround(out_times.back() / st.dt));
    for (size_t n = 1; n <= total_steps && m_next < out_times.size(); ++n) {
        if (n > 1) st.step();
        double t_now = st.dt * static_cast<double>(n);
        if (std::abs(t_now - out_times[m_next]) < 0.5 * st.dt) {
            record(m_next);
            double e = st.energy();
            if (m_next == 1)
                e0 = e;
            else if (e0 > 0.0)
                res.energy_drift = std::max(res.energy_drift, std::abs(e - e0) / e0);
            ++m_next;
        }
    }
    return res;
}

BoundaryTrace solve_spectral_const(const ScalarField& f, double T, const DomainGeometry& geom,
                                   const SurfaceDesc& surface, const std::vector<double>& out_times,
                                   double extra_pad) {
    (void)geom;
    Grid big = enlarge(f.grid, T + extra_pad);
    size_t n0 = big.nx(), n1 = big.ny();
    std::vector<cplx> fhat(n0 * n1, cplx{});
    auto off0 = static_cast<size_t>(std::llround((f.grid.origin[0] - big.origin[0]) / big.spacing[0]));
    auto off1 = static_cast<size_t>(std::llround((f.grid.origin[1] - big.origin[1]) / big.spacing[1]));
    for (size_t i = 0; i < f.grid.nx(); ++i)
        for (size_t j = 0; j < f.grid.ny(); ++j)
            fhat[(i + off0) * n1 + (j + off1)] = f.at(i, j);
    fft2(fhat.data(), n0, n1, -1);

    BoundaryTrace trace;
    trace.surface = surface;
    trace.times = out_times;
    trace.values.assign(surface.size() * out_times.size(), 0.0);
    std::vector<cplx> ut(n0 * n1);
    std::vector<double> u(n0 * n1);
    for (size_t m = 0; m < out_times.size(); ++m) {
        double t = out_times[m];
        for (size_t i = 0; i < n0; ++i) {
            double ki = i <= n0 / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n0);
            double kx = kTwoPi * ki / (big.spacing[0] * static_cast<double>(n0));
            for (size_t j = 0; j < n1; ++j) {
                double kj = j <= n1 / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n1);
                double ky = kTwoPi * kj / (big.spacing[1] * static_cast<double>(n1));
                ut[i * n1 + j] = fhat[i * n1 + j] * std::cos(t * std::hypot(kx, ky));
            }
        }
        fft2(ut.data(), n0, n1, +1);
        double inv = 1.0 / static_cast<double>(n0 * n1);
        for (size_t i = 0; i < u.size(); ++i) u[i] = ut[i].real() * inv;
        for (size_t j = 0; j < surface.size(); ++j) {
            Vec2 p = surface.position[j];
            double fx = (p.x - big.origin[0]) / big.spacing[0];
            double fy = (p.y - big.origin[1]) / big.spacing[1];
            auto ix = static_cast<size_t>(std::clamp(fx, 0.0, static_cast<double>(n0 - 2)));
            auto iy = static_cast<size_t>(std::clamp(fy, 0.0, static_cast<double>(n1 - 2)));
            double ax = fx - static_cast<double>(ix), ay = fy - static_cast<double>(iy);
            trace.values[trace.idx(j, m)] =
                (1 - ax) * ((1 - ay) * u[ix * n1 + iy] + ay * u[ix * n1 + iy + 1]) +
                ax * ((1 - ay) * u[(ix + 1) * n1 + iy] + ay * u[(ix + 1) * n1 + iy + 1]);
        }
    }
    return trace;
}

ScalarField spectral_field_const(const ScalarField& f, double t, double extra_pad) {
    Grid big = enlarge(f.grid, std::abs(t) + extra_pad);
    size_t n0 = big.nx(), n1 = big.ny();
    std::vector<cplx> fhat(n0 * n1, cplx{});
    auto off0 = static_cast<size_t>(std::llround((f.grid.origin[0] - big.origin[0]) / big.spacing[0]));
    auto off1 = static_cast<size_t>(std::llround((f.grid.origin[1] - big.origin[1]) / big.spacing[1]));
    for (size_t i = 0; i < f.grid.nx(); ++i)
        for (size_t j = 0; j < f.grid.ny(); ++j)
            fhat[(i + off0) * n1 + (j + off1)] = f.at(i, j);
    fft2(fhat.data(), n0, n1, -1);
    for (size_t i = 0; i < n0; ++i) {
        double ki = i <= n0 / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n0);
        double kx = kTwoPi * ki / (big.spacing[0] * static_cast<double>(n0));
        for (size_t j = 0; j < n1; ++j) {
            double kj = j <= n1 / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n1);
            double ky = kTwoPi * kj / (big.spacing[1] * static_cast<double>(n1));
            fhat[i * n1 + j] *= std::cos(t * std::hypot(kx, ky));
        }
    }
    fft2(fhat.data(), n0, n1, +1);
    ScalarField out(f.grid);
    double inv = 1.0 / static_cast<double>(n0 * n1);
    for (size_t i = 0; i < f.grid.nx(); ++i)
        for (size_t j = 0; j < f.grid.ny(); ++j)
            out.at(i, j) = fhat[(i + off0) * n1 + (j + off1)].real() * inv;
    return out;
}

PacketTrack trace_wavepacket(Vec2 center, Vec2 dir, double carrier, double sigma,
                             const SoundSpeed& cs, double T, size_t n_out, WaveOptions opts) {
    const Grid& g = cs.field().grid;
    double h = g.min_spacing();
    if (sigma < 3.0 * h)
        throw ValidationError("wavepacket: envelope under-resolved (need sigma >= 3 cells)");
    if (kTwoPi / carrier < 6.0 * h)
        throw ValidationError("wavepacket: carrier under-resolved (need >= 6 points/wavelength)");
    Vec2 d = normalized(dir);

    ScalarField f(g);
    for (size_t i = 0; i < g.nx(); ++i)
        for (size_t j = 0; j < g.ny(); ++j) {
            Vec2 p = g.node2(i, j) - center;
            f.at(i, j) = std::exp(-0.5 * norm2(p) / (sigma * sigma)) * std::cos(carrier * dot(p, d));
        }

    double dt_out = T / static_cast<double>(n_out);
    Stepper st = make_stepper(f, cs, T, dt_out, opts);
    st.u_curr = st.u_prev;

    PacketTrack track;
    Vec2 cp = center, cm = center;  // current centroid estimates
    double window = 3.5 * sigma;

    auto centroid_near = [&](Vec2 guess) {
        double sw = 0.0;
        Vec2 acc{0.0, 0.0};
        auto i0 = static_cast<long>((guess.x - window - st.big.origin[0]) / st.big.spacing[0]);
        auto i1 = static_cast<long>((guess.x + window - st.big.origin[0]) / st.big.spacing[0]) + 1;
        auto j0 = static_cast<long>((guess.y - window - st.big.origin[1]) / st.big.spacing[1]);
        auto j1 = static_cast<long>((guess.y + window - st.big.origin[1]) / st.big.spacing[1]) + 1;
        i0 = std::max(i0, 0L);
        j0 = std::max(j0, 0L);
        i1 = std::min(i1, static_cast<long>(st.big.nx()) - 1);
        j1 = std::min(j1, static_cast<long>(st.big.ny()) - 1);
        for (long i = i0; i <= i1; ++i)
            for (long j = j0; j <= j1; ++j) {
                Vec2 p = st.big.node2(static_cast<size_t>(i), static_cast<size_t>(j));
                if (norm(p - guess) > window) continue;
                double v = st.u_curr[static_cast<size_t>(i) * st.big.ny() + static_cast<size_t>(j)];
                double w = v * v;
                sw += w;
                acc += p * w;
            }
        return sw > 0.0 ? acc / sw : guess;
    };

    track.times.push_back(0.0);
    track.centroid_plus.push_back(cp);
    track.centroid_minus.push_back(cm);

    st.first_step();
    size_t steps_per_out = static_cast<size_t>(std::llround(dt_out / st.dt));
    for (size_t m = 1; m <= n_out; ++m) {
        for (size_t s = (m == 1 ? 1 : 0); s < steps_per_out; ++s) st.step();
        // predicted positions advance along the two branch velocities
        double cploc = cs.c(cp), cmloc = cs.c(cm);
        Vec2 guess_p = cp - d * (cploc * dt_out);
        Vec2 guess_m = cm + d * (cmloc * dt_out);
        cp = centroid_near(guess_p);
        cm = centroid_near(guess_m);
        track.times.push_back(dt_out * static_cast<double>(m));
        track.centroid_plus.push_back(cp);
        track.centroid_minus.push_back(cm);
    }
    return track;
}

}  // namespace tat
