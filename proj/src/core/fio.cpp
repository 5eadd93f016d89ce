#include "core/fio.hpp"

#include <algorithm>
#include <cmath>

namespace tat {

PolarQuadrature PolarQuadrature::make(const Grid& fgrid, size_t n_quad, double r_max, double dr) {
    PolarQuadrature q;
    q.fgrid = fgrid;
    q.n_quad = n_quad;
    q.dr = dr;
    double nyq = kPi / fgrid.min_spacing();
    if (r_max > nyq) r_max = nyq;  // truncated at the grid band
    q.r_max = r_max;
    q.n_radial = static_cast<size_t>(std::floor(r_max / dr));
    if (q.n_radial < 4) throw ValidationError("polar quadrature: too few radial nodes");
    std::vector<Vec2> nodes;
    nodes.reserve(n_quad * q.n_radial);
    for (size_t k = 0; k < n_quad; ++k) {
        double ang = kTwoPi * static_cast<double>(k) / static_cast<double>(n_quad);
        Vec2 d{std::cos(ang), std::sin(ang)};
        for (size_t m = 1; m <= q.n_radial; ++m)
            nodes.push_back(d * (dr * static_cast<double>(m)));
    }
    q.nuft = std::make_shared<NonuniformFT>(fgrid, std::move(nodes));
    return q;
}

FioOperator::FioOperator(const PhaseAmpTable* table, const PolarQuadrature* quad)
    : table_(table), quad_(quad) {
    if (quad_->n_quad % table_->n_dirs() != 0)
        throw ValidationError("fio: quadrature angles must refine the table bins");
}

void FioOperator::upsample_row(size_t j, size_t m, std::vector<double>& phi_up,
                               std::vector<double>& amp_up) const {
    size_t nd = table_->n_dirs();
    size_t nq = quad_->n_quad;
    thread_local std::vector<double> phi_row, amp_row;
    phi_row.resize(nd);
    amp_row.resize(nd);
    for (size_t k = 0; k < nd; ++k) {
        size_t i = table_->idx(j, m, k);
        phi_row[k] = table_->phi[i];
        amp_row[k] = table_->amp[i];
    }
    phi_up.resize(nq);
    amp_up.resize(nq);
    trig_interp(phi_row.data(), nd, phi_up.data(), nq);
    trig_interp(amp_row.data(), nd, amp_up.data(), nq);
}

ComplexTrace FioOperator::apply(const ScalarField& f) const {
    if (!(f.grid == quad_->fgrid)) throw ValidationError("fio: field grid mismatch");
    std::vector<cplx> fc(f.values.begin(), f.values.end());
    return apply(fc);
}

ComplexTrace FioOperator::apply(const std::vector<cplx>& f_complex) const {
    const PolarQuadrature& q = *quad_;
    size_t M = q.n_radial, NQ = q.n_quad;
    std::vector<cplx> fhat(NQ * M);
    q.nuft->forward(f_complex.data(), fhat.data());
    // fold the radial quadrature weight into the coefficients
    for (size_t qq = 0; qq < NQ; ++qq)
        for (size_t m = 0; m < M; ++m) fhat[qq * M + m] *= q.radial_weight(m);

    const auto& surf = table_->surface();
    const auto& times = table_->times();
    ComplexTrace out;
    out.surface = surf;
    out.times = times;
    out.values.assign(surf.size() * times.size(), cplx{});
    double kappa = q.dtheta() / (2.0 * kTwoPi * kTwoPi);

    parallel_for(surf.size(), [&](size_t j) {
        std::vector<double> phi_up, amp_up;
        for (size_t m = 0; m < times.size(); ++m) {
            if (!table_->row_valid(j, m)) continue;
            upsample_row(j, m, phi_up, amp_up);
            cplx acc_total{};
            for (size_t qq = 0; qq < NQ; ++qq) {
                double ph = q.dr * phi_up[qq];
                cplx z{std::cos(ph), std::sin(ph)};
                const cplx* g = fhat.data() + qq * M;
                cplx acc{};
                for (size_t mi = M; mi-- > 0;) acc = acc * z + g[mi];
                acc_total += amp_up[qq] * (acc * z);
            }
            out.values[out.idx(j, m)] = kappa * acc_total;
        }
    });
    return out;
}

std::vector<cplx> FioOperator::apply_adjoint(const ComplexTrace& v) const {
    const PolarQuadrature& q = *quad_;
    size_t M = q.n_radial, NQ = q.n_quad;
    const auto& surf = table_->surface();
    const auto& times = table_->times();
    if (v.surface.size() != surf.size() || v.times.size() != times.size())
        throw ValidationError("fio adjoint: trace layout mismatch");

    size_t n_chunks = std::min<size_t>(32, surf.size());
    std::vector<std::vector<cplx>> chunk_G(n_chunks);
    parallel_for(n_chunks, [&](size_t chunk) {
        std::vector<cplx> G(NQ * M, cplx{});
        std::vector<double> phi_up, amp_up;
        for (size_t j = chunk; j < surf.size(); j += n_chunks) {
            for (size_t m = 0; m < times.size(); ++m) {
                if (!table_->row_valid(j, m)) continue;
                cplx coeff = trace_weight(surf, times, j, m) * v.values[v.idx(j, m)];
                if (coeff == cplx{}) continue;
                upsample_row(j, m, phi_up, amp_up);
                for (size_t qq = 0; qq < NQ; ++qq) {
                    double ph = -q.dr * phi_up[qq];
                    cplx zbar{std::cos(ph), std::sin(ph)};
                    cplx w = amp_up[qq] * coeff;
                    cplx* Gq = G.data() + qq * M;
                    for (size_t mi = 0; mi < M; ++mi) {
                        w *= zbar;
                        Gq[mi] += w;
                    }
                }
            }
        }
        chunk_G[chunk] = std::move(G);
    });
    std::vector<cplx> G(NQ * M, cplx{});
    for (const auto& cg : chunk_G)
        for (size_t i = 0; i < G.size(); ++i) G[i] += cg[i];
    for (size_t qq = 0; qq < NQ; ++qq)
        for (size_t m = 0; m < M; ++m) G[qq * M + m] *= q.radial_weight(m);

    std::vector<cplx> field(q.fgrid.size());
    q.nuft->adjoint(G.data(), field.data());
    double cell = q.fgrid.spacing[0] * q.fgrid.spacing[1];
    double scale = q.dtheta() / (2.0 * kTwoPi * kTwoPi) / cell;
    for (auto& x : field) x *= scale;
    return field;
}

double SymbolTable::max_b0() const {
    double m = 0.0;
    for (float v : b0) m = std::max(m, static_cast<double>(v));
    return m;
}

SignSymbolData compute_b0(int sign, const PhaseAmpTable& table, const CutoffWindow& chi,
                          const SoundSpeed& cs, const DomainGeometry& geom, const Grid& zgrid,
                          size_t n_dirs, double T, VisibilityOptions vis_opts,
                          RayOptions ray_opts) {
    SignSymbolData out;
    out.b0.grid = zgrid;
    out.b0.n_dirs = n_dirs;
    out.b0.b0.assign(zgrid.size() * n_dirs, 0.0f);
    out.cone = ConeMask(zgrid, n_dirs);
    sweep_crossings(zgrid, n_dirs, cs, geom, T, {sign},
                    [&](size_t node, size_t bin, int, const std::vector<CrossingRecord>& cr) {
                        double b0 = 0.0;
                        double cone_w = 0.0;
                        for (const auto& c : cr) {
                            double xv = chi.value(c.w, c.t);
                            if (xv > 0.0) {
                                double a;
                                if (table.amp_lookup(c.w, c.t, bin, a)) b0 += a * a * xv;
                            }
                            cone_w = std::max(cone_w, glancing_taper(c.normal_frac, vis_opts) * xv);
                        }
                        out.b0.b0[node * n_dirs + bin] = static_cast<float>(b0);
                        out.cone.set(node, bin, cone_w);
                    },
                    ray_opts);
    return out;
}

std::vector<cplx> cone_multiply(const std::vector<cplx>& field, const Grid& grid,
                                const std::vector<float>& mult, size_t n_dirs) {
    size_t n0 = grid.nx(), n1 = grid.ny();
    if (field.size() != n0 * n1) throw ValidationError("cone_multiply: size mismatch");
    std::vector<cplx> fhat(field);
    fft2(fhat.data(), n0, n1, -1);

    // assign every frequency node to its nearest direction bin
    std::vector<uint16_t> bin_of(n0 * n1);
    for (size_t i = 0; i < n0; ++i) {
        double ki = i <= n0 / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n0);
        for (size_t j = 0; j < n1; ++j) {
            double kj = j <= n1 / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n1);
            double kx = kTwoPi * ki / (grid.spacing[0] * static_cast<double>(n0));
            double ky = kTwoPi * kj / (grid.spacing[1] * static_cast<double>(n1));
            double ang = std::atan2(ky, kx);
            if (ang < 0.0) ang += kTwoPi;
            auto b = static_cast<size_t>(
                std::llround(ang * static_cast<double>(n_dirs) / kTwoPi));
            bin_of[i * n1 + j] = static_cast<uint16_t>(b % n_dirs);
        }
    }

    std::vector<std::vector<cplx>> bands(n_dirs);
    parallel_for(n_dirs, [&](size_t b) {
        std::vector<cplx> band(n0 * n1, cplx{});
        bool any = false;
        for (size_t i = 0; i < field.size(); ++i)
            if (bin_of[i] == b && fhat[i] != cplx{}) {
                band[i] = fhat[i];
                any = true;
            }
        if (any) {
            fft2(band.data(), n0, n1, +1);
            double inv = 1.0 / static_cast<double>(n0 * n1);
            for (auto& v : band) v *= inv;
        } else {
            band.clear();
        }
        bands[b] = std::move(band);
    });

    std::vector<cplx> out(n0 * n1, cplx{});
    for (size_t b = 0; b < n_dirs; ++b) {
        if (bands[b].empty()) continue;
        for (size_t node = 0; node < out.size(); ++node)
            out[node] += static_cast<double>(mult[node * n_dirs + b]) * bands[b][node];
    }
    return out;
}

ScalarField phase_space_filter(const ScalarField& f, const ConeMask& mask, double r_cut) {
    std::vector<cplx> fc(f.values.begin(), f.values.end());
    if (r_cut > 0.0) {
        size_t n0 = f.grid.nx(), n1 = f.grid.ny();
        fft2(fc.data(), n0, n1, -1);
        for (size_t i = 0; i < n0; ++i) {
            double ki = i <= n0 / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n0);
            for (size_t j = 0; j < n1; ++j) {
                double kj = j <= n1 / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n1);
                double kx = kTwoPi * ki / (f.grid.spacing[0] * static_cast<double>(n0));
                double ky = kTwoPi * kj / (f.grid.spacing[1] * static_cast<double>(n1));
                double r = std::hypot(kx, ky) / r_cut;
                double r8 = std::pow(r, 8);
                fc[i * n1 + j] *= std::exp(-r8);
            }
        }
        fft2(fc.data(), n0, n1, +1);
        double inv = 1.0 / static_cast<double>(n0 * n1);
        for (auto& v : fc) v *= inv;
    }
    auto filtered = cone_multiply(fc, f.grid, mask.weights, mask.n_dirs);
    ScalarField out(f.grid);
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = filtered[i].real();
    return out;
}

std::vector<float> CorrectionOp::multiplier() const {
    std::vector<float> m(b0.b0.size());
    double floor_v = b0.eps_b;
    for (size_t i = 0; i < m.size(); ++i) {
        double denom = std::max(static_cast<double>(b0.b0[i]), floor_v);
        m[i] = static_cast<float>(theta.weights[i] / denom);
    }
    return m;
}

std::pair<ConeMask, ConeMask> build_theta_pair(const SignSymbolData& plus,
                                               const SignSymbolData& minus) {
    ConeMask tp = plus.cone, tm = minus.cone;
    double eps_p = plus.b0.eps_b, eps_m = minus.b0.eps_b;
    for (size_t i = 0; i < tp.weights.size(); ++i) {
        double wp = tp.weights[i], wm = tm.weights[i];
        // taper each sign where its symbol sits at the regularization floor
        wp *= smooth_ramp(static_cast<double>(plus.b0.b0[i]) / eps_p - 1.0);
        wm *= smooth_ramp(static_cast<double>(minus.b0.b0[i]) / eps_m - 1.0);
        double s = wp + wm;
        if (s > 0.0) {
            tp.weights[i] = static_cast<float>(wp / s);
            tm.weights[i] = static_cast<float>(wm / s);
        } else {
            tp.weights[i] = 0.0f;
            tm.weights[i] = 0.0f;
        }
    }
    return {tp, tm};
}

ScalarField reconstruct_hyperplane(const BoundaryTrace& data, const FioOperator& s_plus,
                                   const FioOperator& s_minus, const CutoffWindow& chi,
                                   const CorrectionOp& r_plus, const CorrectionOp& r_minus) {
    if (!data.even_extended)
        throw ValidationError("reconstruct: data must be even-extended to [-T, T]");
    ComplexTrace v = apply_window(chi, data);
    auto wp = s_plus.apply_adjoint(v);
    auto wm = s_minus.apply_adjoint(v);
    const Grid& g = s_plus.quad().fgrid;
    auto yp = cone_multiply(wp, g, r_plus.multiplier(), r_plus.theta.n_dirs);
    auto ym = cone_multiply(wm, g, r_minus.multiplier(), r_minus.theta.n_dirs);
    ScalarField out(g);
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = (yp[i] + ym[i]).real();
    return out;
}

CrossTermReport cross_term_residual(const FioOperator& s_plus, const FioOperator& s_minus,
                                    const CutoffWindow& chi,
                                    const std::vector<ScalarField>& probes,
                                    const std::vector<double>& carriers) {
    if (probes.size() != carriers.size())
        throw ValidationError("cross_term_residual: probe/carrier count mismatch");
    CrossTermReport rep;
    rep.carriers = carriers;
    const Grid& g = s_plus.quad().fgrid;
    for (const auto& f : probes) {
        auto minus_trace = apply_window(chi, s_minus.apply(f));
        auto plus_trace = apply_window(chi, s_plus.apply(f));
        auto cross = s_plus.apply_adjoint(minus_trace);
        auto self = s_plus.apply_adjoint(plus_trace);
        double nc = field_l2(cross, g), ns = field_l2(self, g);
        rep.ratios.push_back(ns > 0.0 ? nc / ns : 0.0);
    }
    // least squares slope of log ratio vs log k over nonzero entries
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (size_t i = 0; i < rep.ratios.size(); ++i) {
        if (rep.ratios[i] <= 0.0) continue;
        double x = std::log(carriers[i]), y = std::log(rep.ratios[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    rep.fit_exponent = n >= 2 ? (static_cast<double>(n) * sxy - sx * sy) /
                                    (static_cast<double>(n) * sxx - sx * sx)
                              : 0.0;
    return rep;
}

ScalarField gaussian_packet(const Grid& g, Vec2 center, Vec2 dir, double carrier, double sigma) {
    ScalarField f(g);
    Vec2 d = normalized(dir);
    for (size_t ix = 0; ix < g.nx(); ++ix)
        for (size_t iy = 0; iy < g.ny(); ++iy) {
            Vec2 p = g.node2(ix, iy) - center;
            double env = std::exp(-0.5 * norm2(p) / (sigma * sigma));
            f.at(ix, iy) = env * std::cos(carrier * dot(p, d));
        }
    return f;
}

double field_l2(const std::vector<cplx>& f, const Grid& g) {
    double s = 0.0;
    for (const auto& v : f) s += std::norm(v);
    return std::sqrt(s * g.spacing[0] * g.spacing[1]);
}

}  // namespace tat
