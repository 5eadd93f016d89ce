#include "core/ray.hpp"

#include <algorithm>
#include <cmath>

namespace tat {

namespace {

// First intersection parameter of the segment p + s*u, s in (eps, len], with
// the inflated support disk of any bump; +inf when the segment stays clear.
double distance_to_nonuniform(const SoundSpeed& cs, Vec2 p, Vec2 u, double len) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : cs.bumps()) {
        double r = b.radius + 1e-12;
        Vec2 d = p - b.center;
        double bq = dot(d, u);
        double cq = norm2(d) - r * r;
        double disc = bq * bq - cq;
        if (disc <= 0.0) continue;
        double sd = std::sqrt(disc);
        double s0 = -bq - sd, s1 = -bq + sd;
        double s = s0 > 1e-14 ? s0 : (s1 > 1e-14 ? s1 : -1.0);
        if (s > 0.0 && s <= len) best = std::min(best, s);
    }
    return best;
}

// Crossing parameters of the straight segment with the surface manifold.
void straight_crossings(const DomainGeometry& geom, Vec2 p, Vec2 u, double len,
                        std::vector<double>& out) {
    out.clear();
    if (geom.kind == DomainGeometry::Kind::HalfSpace) {
        if (std::abs(u.y) < 1e-300) return;
        double s = -p.y / u.y;
        if (s > 1e-14 && s <= len) out.push_back(s);
        return;
    }
    Vec2 d = p - geom.center;
    double bq = dot(d, u);
    double cq = norm2(d) - geom.radius * geom.radius;
    double disc = bq * bq - cq;
    if (disc <= 0.0) return;
    double sd = std::sqrt(disc);
    for (double s : {-bq - sd, -bq + sd})
        if (s > 1e-14 && s <= len) out.push_back(s);
    std::sort(out.begin(), out.end());
}

}  // namespace

double PhasePoint::on_shell_residual(const SoundSpeed& cs) const {
    double c2 = cs.c2(x);
    double p = tau * tau - c2 * norm2(xi);
    return std::abs(p) / (tau * tau + c2 * norm2(xi));
}

double default_h_ode(const SoundSpeed& cs) {
    return cs.field().grid.min_spacing() / (4.0 * cs.c_max());
}

RayIntegrator::RayIntegrator(const SoundSpeed& cs, Vec2 y, Vec2 eta, int sign, RayOptions opts)
    : cs_(&cs), sign_(sign), opts_(opts), x_(y), xi_(eta) {
    if (norm(eta) < 1e-300) throw ValidationError("ray: zero covector seed");
    double cy = cs_->c(y);
    double neta = norm(eta);
    tau_ = sign_ * cy * neta;
    Vec2 gcy = cs_->grad_c(y);
    Vec2 ehat = eta / neta;
    dtau_ = {sign_ * neta * gcy.x, sign_ * neta * gcy.y, sign_ * cy * ehat.x,
             sign_ * cy * ehat.y};
    phi_ = dot(y, eta);  // plane-wave initial phase, constant along the strip
    h_ = opts_.h_ode > 0.0 ? opts_.h_ode : default_h_ode(cs);
}

Vec2 RayIntegrator::velocity() const {
    return xi_ * (-cs_->c2(x_) / tau_);
}

double RayIntegrator::hamiltonian() const {
    return tau_ * tau_ - cs_->c2(x_) * norm2(xi_);
}

double RayIntegrator::hamiltonian_residual() const {
    return std::abs(hamiltonian()) / (tau_ * tau_ + cs_->c2(x_) * norm2(xi_));
}

Mat2 RayIntegrator::phase_hessian() const {
    Mat2 H = K_ * J_.inverse();
    // symmetrize; the fan is Lagrangian so H is symmetric up to ODE error
    double off = 0.5 * (H.b + H.c);
    H.b = off;
    H.c = off;
    return H;
}

struct RayIntegrator::Deriv {
    Vec2 dx, dxi;
    Mat2 dJ, dK, dJe, dKe;
    double da = 0.0, dphi = 0.0;
};

RayIntegrator::Deriv RayIntegrator::rhs(Vec2 x, Vec2 xi, const Mat2& J, const Mat2& K,
                                        const Mat2& Je, const Mat2& Ke, double a) const {
    Deriv d;
    double c2 = cs_->c2(x);
    Vec2 g2 = cs_->grad_c2(x);
    double xi2 = norm2(xi);
    d.dx = xi * (-c2 / tau_);
    d.dxi = g2 * (xi2 / (2.0 * tau_));
    d.dphi = dot(xi, d.dx) + tau_;
    if (!opts_.variational) return d;

    Mat2 H2 = cs_->hess_c2(x);
    Mat2 A11 = Mat2::outer(xi, g2) * (-1.0 / tau_);
    Mat2 A12 = Mat2::identity() * (-c2 / tau_);
    Mat2 A21 = H2 * (xi2 / (2.0 * tau_));
    Mat2 A22 = Mat2::outer(g2, xi) * (1.0 / tau_);
    Vec2 b1 = xi * (c2 / (tau_ * tau_));
    Vec2 b2 = g2 * (-xi2 / (2.0 * tau_ * tau_));
    Vec2 dt_y{dtau_[0], dtau_[1]};
    Vec2 dt_e{dtau_[2], dtau_[3]};
    d.dJ = A11 * J + A12 * K + Mat2::outer(b1, dt_y);
    d.dK = A21 * J + A22 * K + Mat2::outer(b2, dt_y);
    d.dJe = A11 * Je + A12 * Ke + Mat2::outer(b1, dt_e);
    d.dKe = A21 * Je + A22 * Ke + Mat2::outer(b2, dt_e);

    // Transport of the leading amplitude along the ray:
    //   da/dt = -a/(2 tau) [ c |xi| (xihat . grad c) + c^2 (xihat' H xihat - tr H) ]
    // with H the phase Hessian K J^{-1} of the carried fan.
    double nxi = std::sqrt(xi2);
    Vec2 xihat = xi / nxi;
    Mat2 Hphi = K * J.inverse();
    double quad = dot(xihat, Hphi * xihat);
    double c = std::sqrt(c2);
    Vec2 gc = g2 * (0.5 / c);
    double trans = c * nxi * dot(xihat, gc) + c2 * (quad - Hphi.trace());
    d.da = -a * trans / (2.0 * tau_);
    return d;
}

void RayIntegrator::rk4_step(double h) {
    auto k1 = rhs(x_, xi_, J_, K_, Je_, Ke_, a_);
    auto k2 = rhs(x_ + k1.dx * (h / 2), xi_ + k1.dxi * (h / 2), J_ + k1.dJ * (h / 2),
                  K_ + k1.dK * (h / 2), Je_ + k1.dJe * (h / 2), Ke_ + k1.dKe * (h / 2),
                  a_ + k1.da * (h / 2));
    auto k3 = rhs(x_ + k2.dx * (h / 2), xi_ + k2.dxi * (h / 2), J_ + k2.dJ * (h / 2),
                  K_ + k2.dK * (h / 2), Je_ + k2.dJe * (h / 2), Ke_ + k2.dKe * (h / 2),
                  a_ + k2.da * (h / 2));
    auto k4 = rhs(x_ + k3.dx * h, xi_ + k3.dxi * h, J_ + k3.dJ * h, K_ + k3.dK * h,
                  Je_ + k3.dJe * h, Ke_ + k3.dKe * h, a_ + k3.da * h);
    auto blend = [h](auto s, auto a, auto b, auto c, auto d) {
        return s + (a + b * 2.0 + c * 2.0 + d) * (h / 6.0);
    };
    x_ = blend(x_, k1.dx, k2.dx, k3.dx, k4.dx);
    xi_ = blend(xi_, k1.dxi, k2.dxi, k3.dxi, k4.dxi);
    phi_ += h / 6.0 * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
    if (opts_.variational) {
        J_ = blend(J_, k1.dJ, k2.dJ, k3.dJ, k4.dJ);
        K_ = blend(K_, k1.dK, k2.dK, k3.dK, k4.dK);
        Je_ = blend(Je_, k1.dJe, k2.dJe, k3.dJe, k4.dJe);
        Ke_ = blend(Ke_, k1.dKe, k2.dKe, k3.dKe, k4.dKe);
        a_ += h / 6.0 * (k1.da + 2 * k2.da + 2 * k3.da + k4.da);
    }
    t_ += h;
    post_step_checks();
}

void RayIntegrator::uniform_jump(double dt) {
    // c == 1 along the whole segment: xi, tau constant, straight motion.
    Vec2 v = xi_ * (-1.0 / tau_);
    Vec2 x0 = x_;
    Mat2 J0 = J_, Je0 = Je_;
    x_ = x_ + v * dt;
    phi_ += dt * (tau_ * tau_ - norm2(xi_)) / tau_;
    if (opts_.variational) {
        Vec2 b1 = xi_ * (1.0 / (tau_ * tau_));
        Mat2 dJ = K_ * (-1.0 / tau_) + Mat2::outer(b1, Vec2{dtau_[0], dtau_[1]});
        Mat2 dJe = Ke_ * (-1.0 / tau_) + Mat2::outer(b1, Vec2{dtau_[2], dtau_[3]});
        J_ = J0 + dJ * dt;
        Je_ = Je0 + dJe * dt;
        // Amplitude: grad c = 0, so d log a = -(1/(2 tau)) (xihat'H xihat - tr H)
        // with H(t) = K (J0 + t dJ)^{-1}. Simpson substeps on the closed form.
        double nxi = norm(xi_);
        Vec2 xihat = xi_ / nxi;
        auto dloga = [&](double s) {
            Mat2 H = K_ * (J0 + dJ * s).inverse();
            return -(dot(xihat, H * xihat) - H.trace()) / (2.0 * tau_);
        };
        bool flat = std::abs(K_.a) + std::abs(K_.b) + std::abs(K_.c) + std::abs(K_.d) == 0.0;
        if (!flat) {
            int nsub = std::max(2, static_cast<int>(std::ceil(std::abs(dt) / 0.05)));
            nsub += nsub % 2;  // Simpson needs an even count
            double hsub = dt / nsub;
            double acc = dloga(0.0) + dloga(dt);
            for (int i = 1; i < nsub; ++i) acc += dloga(hsub * i) * (i % 2 ? 4.0 : 2.0);
            a_ *= std::exp(acc * hsub / 3.0);
        }
    }
    (void)x0;
    t_ += dt;
    post_step_checks();
}

void RayIntegrator::post_step_checks() {
    max_drift_ = std::max(max_drift_, hamiltonian_residual());
    if (opts_.variational && !degeneracy_t_ && std::abs(J_.det()) < opts_.conj_det_eps)
        degeneracy_t_ = t_;
    const Grid& g = cs_->field().grid;
    Vec2 lo = g.lower2(), hi = g.upper2();
    double pad = opts_.box_pad;
    if (x_.x < lo.x - pad || x_.x > hi.x + pad || x_.y < lo.y - pad || x_.y > hi.y + pad)
        truncated_ = true;
}

void RayIntegrator::advance_to(double t_target) {
    double dir = t_target >= t_ ? 1.0 : -1.0;
    while (dir * (t_target - t_) > 1e-15 && !truncated_) {
        double rem = dir * (t_target - t_);
        if (cs_->point_uniform(x_, 0.0)) {
            Vec2 u = normalized(velocity() * dir);
            // in uniform territory speed is exactly 1, so path length == time
            double entry = distance_to_nonuniform(*cs_, x_, u, rem);
            if (entry >= rem) {
                uniform_jump(dir * rem);
                return;
            }
            if (entry > 0.25 * h_) {
                uniform_jump(dir * entry);
                continue;
            }
        }
        rk4_step(dir * std::min(h_, rem));
    }
}

StripSample RayIntegrator::sample() const {
    StripSample s;
    s.t = t_;
    s.x = x_;
    s.xi = xi_;
    s.phi = phi_;
    s.a = a_;
    s.jx = J_;
    s.kx = K_;
    s.jeta = Je_;
    s.keta = Ke_;
    s.det_jx = J_.det();
    return s;
}

BicharStrip trace_bichar(Vec2 y, Vec2 eta_hat, int sign, const SoundSpeed& cs, double t_lo,
                         double t_hi, double record_dt, const DomainGeometry* geom,
                         RayOptions opts) {
    if (t_lo > 0.0 || t_hi < 0.0) throw ValidationError("trace_bichar: t span must contain 0");
    if (!(record_dt > 0.0)) throw ValidationError("trace_bichar: record_dt must be > 0");
    BicharStrip strip;
    strip.sign = sign;
    strip.seed_y = y;
    strip.seed_eta = eta_hat;

    auto run_side = [&](double t_end, std::vector<StripSample>& out) {
        RayIntegrator ri(cs, y, eta_hat, sign, opts);
        strip.tau = ri.tau();
        out.push_back(ri.sample());
        double dir = t_end >= 0.0 ? 1.0 : -1.0;
        auto n = static_cast<size_t>(std::floor(std::abs(t_end) / record_dt + 1e-9));
        for (size_t i = 1; i <= n && !ri.truncated(); ++i) {
            ri.advance_to(dir * record_dt * static_cast<double>(i));
            out.push_back(ri.sample());
        }
        if (std::abs(t_end) - record_dt * static_cast<double>(n) > 1e-9 && !ri.truncated()) {
            ri.advance_to(t_end);
            out.push_back(ri.sample());
        }
        strip.truncated = strip.truncated || ri.truncated();
        strip.max_hamiltonian_drift = std::max(strip.max_hamiltonian_drift, ri.max_drift());
    };

    std::vector<StripSample> fwd, bwd;
    run_side(t_hi, fwd);
    if (t_lo < 0.0) run_side(t_lo, bwd);
    std::reverse(bwd.begin(), bwd.end());
    if (!bwd.empty()) bwd.pop_back();  // drop duplicate t = 0 sample
    strip.samples = std::move(bwd);
    strip.samples.insert(strip.samples.end(), fwd.begin(), fwd.end());
    if (geom) {
        auto cr = endpoint_crossings(y, eta_hat, sign, cs, *geom,
                                     std::max(std::abs(t_lo), std::abs(t_hi)), opts);
        strip.crossings = std::move(cr);
    }
    return strip;
}

std::vector<CrossingRecord> endpoint_crossings(Vec2 y, Vec2 eta_hat, int sign,
                                               const SoundSpeed& cs, const DomainGeometry& geom,
                                               double T, RayOptions opts,
                                               double glancing_threshold) {
    std::vector<CrossingRecord> out;
    opts.variational = false;
    std::vector<double> roots;

    auto record_at = [&](const RayIntegrator& ri) {
        CrossingRecord r;
        r.x = ri.x();
        r.t = ri.t();
        r.xi = ri.xi();
        r.tau = ri.tau();
        Vec2 n = geom.boundary_normal(r.x);
        r.normal_frac = std::abs(dot(r.xi, n)) / norm(r.xi);
        r.glancing = r.normal_frac < glancing_threshold;
        if (geom.kind == DomainGeometry::Kind::HalfSpace) {
            r.w = r.x.x;
        } else {
            double ang = std::atan2(r.x.y - geom.center.y, r.x.x - geom.center.x);
            double rel = ang - geom.gamma_lo;
            while (rel < 0.0) rel += kTwoPi;
            while (rel >= kTwoPi) rel -= kTwoPi;
            r.w = rel * geom.radius;
        }
        out.push_back(r);
    };

    for (double dir : {1.0, -1.0}) {
        RayIntegrator ri(cs, y, eta_hat, sign, opts);
        size_t found_this_side = 0;
        double psi_prev = geom.boundary_defining(ri.x());
        while (dir * ri.t() < T - 1e-15 && !ri.truncated()) {
            double rem = T - dir * ri.t();
            bool uniform_here = cs.point_uniform(ri.x(), 0.0);
            if (uniform_here) {
                Vec2 u = normalized(ri.velocity() * dir);
                double entry = distance_to_nonuniform(cs, ri.x(), u, rem);
                if (entry > 0.25 * ri.h_step()) {
                    double seg = std::min(entry, rem);
                    double t_seg = ri.t();
                    straight_crossings(geom, ri.x(), u, seg, roots);
                    for (double s : roots) {
                        ri.advance_to(t_seg + dir * s);
                        record_at(ri);
                        ++found_this_side;
                    }
                    ri.advance_to(t_seg + dir * seg);
                    psi_prev = geom.boundary_defining(ri.x());
                    if (entry >= rem) break;
                    continue;
                }
            }
            // inside or about to enter a bump: RK4 step + sign-change watch
            RayIntegrator before = ri;
            double h = std::min(ri.h_step(), rem);
            ri.advance_to(ri.t() + dir * h);
            double psi = geom.boundary_defining(ri.x());
            if (psi * psi_prev < 0.0) {
                double lo = before.t(), hi = ri.t();
                RayIntegrator lo_state = before;
                for (int it = 0; it < 60 && hi != lo; ++it) {
                    double mid = 0.5 * (lo + hi);
                    RayIntegrator tmp = lo_state;
                    tmp.advance_to(mid);
                    if (geom.boundary_defining(tmp.x()) * psi_prev > 0.0) {
                        lo_state = tmp;
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo_state.advance_to(0.5 * (lo + hi));
                record_at(lo_state);
                ++found_this_side;
            }
            psi_prev = psi;
        }
        if (found_this_side > 1)
            throw Error("strip crossed the measured surface more than once per time sign");
    }
    std::sort(out.begin(), out.end(),
              [](const CrossingRecord& a, const CrossingRecord& b) { return a.t < b.t; });
    return out;
}

std::optional<double> conjugate_point_monitor(const BicharStrip& strip, double eps) {
    // earliest degeneracy in |t|, searching outward from t = 0
    std::optional<double> best;
    for (const auto& s : strip.samples)
        if (std::abs(s.det_jx) < eps)
            if (!best || std::abs(s.t) < std::abs(*best)) best = s.t;
    return best;
}

}  // namespace tat
