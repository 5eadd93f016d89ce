#include "core/patches.hpp"

#include <cmath>

namespace tat {

Vec2 BoundaryChart::from_chart(double w, double wn) const {
    if (geom.kind == DomainGeometry::Kind::HalfSpace) return {w, wn};
    double ang = geom.gamma_lo + w / geom.radius;
    return geom.center + Vec2{std::cos(ang), std::sin(ang)} * (geom.radius + wn);
}

std::pair<double, double> BoundaryChart::to_chart(Vec2 x) const {
    if (geom.kind == DomainGeometry::Kind::HalfSpace) return {x.x, x.y};
    double wn = norm(x - geom.center) - geom.radius;
    double ang = std::atan2(x.y - geom.center.y, x.x - geom.center.x);
    double rel = ang - geom.gamma_lo;
    while (rel < 0.0) rel += kTwoPi;
    while (rel >= kTwoPi) rel -= kTwoPi;
    return {rel * geom.radius, wn};
}

double BoundaryChart::metric_jacobian(double /*w*/, double wn) const {
    if (geom.kind == DomainGeometry::Kind::HalfSpace) return 1.0;
    return (geom.radius + wn) / geom.radius;
}

double PatchSystem::chi_sum(double w, double t) const {
    double s = 0.0;
    for (const auto& c : chi) s += c.value(w, t);
    return s;
}

PatchSystem build_patch_system(const DomainGeometry& geom, size_t n_patches, double taper_frac,
                               double t_part, double t_data) {
    if (geom.kind != DomainGeometry::Kind::ConvexBody)
        throw ValidationError("patch system: convex-body geometry required");
    if (n_patches < 2) throw ValidationError("patch system: need at least 2 patches");
    if (!(taper_frac > 0.0 && taper_frac < 1.0))
        throw ValidationError("patch system: taper fraction must be in (0, 1)");
    if (!(t_part > 0.0 && t_part < t_data))
        throw ValidationError("patch system: need 0 < t_part < t_data");

    PatchSystem sys;
    sys.geom = geom;
    sys.n_patches = n_patches;
    sys.t_part = t_part;
    sys.t_data = t_data;

    bool full = geom.full_circle();
    double R = geom.radius;
    // partition GammaTilde into equal parameter-width patches
    double tilde_lo = full ? 0.0 : (geom.gamma_tilde_lo - geom.gamma_lo) * R;
    double tilde_hi = full ? kTwoPi * R : (geom.gamma_tilde_hi - geom.gamma_lo) * R;
    double span = tilde_hi - tilde_lo;
    double width = span / static_cast<double>(n_patches);
    double half_overlap = 0.5 * taper_frac * width;

    if (!full) {
        double margin_lo = tilde_lo - 0.0;
        double margin_hi = (geom.gamma_hi - geom.gamma_lo) * R - tilde_hi;
        if (margin_lo < half_overlap || margin_hi < half_overlap)
            throw ValidationError(
                "patch system: GammaTilde margin too small for the taper widths");
    }

    for (size_t j = 0; j < n_patches; ++j) {
        double lo = tilde_lo + width * static_cast<double>(j);
        double hi = lo + width;
        CutoffWindow w;
        w.periodic = full;
        w.period = kTwoPi * R;
        w.support_lo = lo - half_overlap;
        w.plateau_lo = lo + half_overlap;
        w.plateau_hi = hi - half_overlap;
        w.support_hi = hi + half_overlap;
        w.t_plateau = t_part;
        w.t_support = t_data;
        w.validate();
        sys.chi.push_back(w);
        BoundaryChart chart;
        chart.geom = geom;
        chart.patch_id = j;
        chart.w_lo = w.support_lo;
        chart.w_hi = w.support_hi;
        sys.charts.push_back(chart);
    }
    return sys;
}

ScalarField patch_reconstruct(size_t j, const BoundaryTrace& data, const PatchSystem& system,
                              const FioOperator& s_plus, const FioOperator& s_minus,
                              const CorrectionOp& r_plus, const CorrectionOp& r_minus) {
    if (j >= system.n_patches) throw ValidationError("patch_reconstruct: patch index");
    return reconstruct_hyperplane(data, s_plus, s_minus, system.chi[j], r_plus, r_minus);
}

ScalarField combine_patches(const std::vector<ScalarField>& patch_fields,
                            const std::vector<ConeMask>& theta) {
    if (patch_fields.empty() || patch_fields.size() != theta.size())
        throw ValidationError("combine_patches: field/theta count mismatch");
    ScalarField out(patch_fields.front().grid);
    for (size_t j = 0; j < patch_fields.size(); ++j) {
        if (!(patch_fields[j].grid == out.grid))
            throw ValidationError("combine_patches: grid mismatch");
        ScalarField filtered = phase_space_filter(patch_fields[j], theta[j]);
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += filtered.values[i];
    }
    return out;
}

std::pair<std::vector<SignSymbolData>, std::vector<SignSymbolData>> compute_patch_b0(
    const PhaseAmpTable& table_plus, const PhaseAmpTable& table_minus, const PatchSystem& system,
    const SoundSpeed& cs, const Grid& zgrid, size_t n_dirs, double T,
    VisibilityOptions vis_opts, RayOptions ray_opts) {
    size_t np = system.n_patches;
    auto init = [&](const std::vector<SignSymbolData>*) {
        std::vector<SignSymbolData> v(np);
        for (auto& d : v) {
            d.b0.grid = zgrid;
            d.b0.n_dirs = n_dirs;
            d.b0.b0.assign(zgrid.size() * n_dirs, 0.0f);
            d.cone = ConeMask(zgrid, n_dirs);
        }
        return v;
    };
    std::vector<SignSymbolData> plus = init(nullptr), minus = init(nullptr);
    for (int sign : {+1, -1}) {
        const PhaseAmpTable& table = sign > 0 ? table_plus : table_minus;
        std::vector<SignSymbolData>& out = sign > 0 ? plus : minus;
        sweep_crossings(
            zgrid, n_dirs, cs, system.geom, T, {sign},
            [&](size_t node, size_t bin, int, const std::vector<CrossingRecord>& cr) {
                for (const auto& c : cr) {
                    double taper = glancing_taper(c.normal_frac, vis_opts);
                    double a = 0.0;
                    bool have_a = table.amp_lookup(c.w, c.t, bin, a);
                    for (size_t j = 0; j < np; ++j) {
                        double xv = system.chi[j].value(c.w, c.t);
                        if (xv <= 0.0) continue;
                        size_t i = node * n_dirs + bin;
                        if (have_a)
                            out[j].b0.b0[i] += static_cast<float>(a * a * xv);
                        double cw = taper * xv;
                        if (cw > out[j].cone.weights[i])
                            out[j].cone.weights[i] = static_cast<float>(cw);
                    }
                }
            },
            ray_opts);
    }
    return {std::move(plus), std::move(minus)};
}

std::vector<ConeMask> build_patch_theta(const std::vector<SignSymbolData>& plus,
                                        const std::vector<SignSymbolData>& minus) {
    if (plus.empty() || plus.size() != minus.size())
        throw ValidationError("patch theta: per-patch data mismatch");
    size_t n_patches = plus.size();
    std::vector<ConeMask> theta;
    theta.reserve(n_patches);
    for (size_t j = 0; j < n_patches; ++j) {
        ConeMask m = plus[j].cone;
        for (size_t i = 0; i < m.weights.size(); ++i)
            m.weights[i] += minus[j].cone.weights[i];
        theta.push_back(std::move(m));
    }
    size_t n = theta.front().weights.size();
    for (size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (size_t j = 0; j < n_patches; ++j) s += theta[j].weights[i];
        if (s > 0.0) {
            for (size_t j = 0; j < n_patches; ++j)
                theta[j].weights[i] = static_cast<float>(theta[j].weights[i] / s);
        }
    }
    return theta;
}

}  // namespace tat
