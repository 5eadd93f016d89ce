#include "core/trace.hpp"

#include <cmath>
#include <fstream>

namespace tat {

double BoundaryTrace::rel_l2_diff(const BoundaryTrace& ref) const {
    if (values.size() != ref.values.size()) throw Error("trace compare: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        double d = values[i] - ref.values[i];
        num += d * d;
        den += ref.values[i] * ref.values[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

void BoundaryTrace::check_even_symmetry() const {
    if (!even_extended) return;
    size_t nt = times.size();
    for (size_t j = 0; j < surface.size(); ++j)
        for (size_t m = 0; m < nt; ++m)
            if (values[idx(j, m)] != values[idx(j, nt - 1 - m)])
                throw ValidationError("even-extended trace is not mirror symmetric");
}

void BoundaryTrace::export_raw(const std::string& prefix) const {
    std::ofstream out(prefix + ".f64", std::ios::binary);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 8));
    std::ofstream meta(prefix + ".meta");
    meta << "axes surface time\n";
    meta << "n_surf " << surface.size() << "\nn_times " << times.size() << "\n";
    meta << "t_lo " << times.front() << "\nt_hi " << times.back() << "\n";
    meta << "surface_param_start " << surface.param.front() << "\n";
    meta << "surface_param_step " << surface.spacing << "\n";
    meta << "even_extended " << (even_extended ? 1 : 0) << "\n";
}

BoundaryTrace even_extend(const BoundaryTrace& physical) {
    if (physical.even_extended) return physical;
    if (physical.times.empty() || std::abs(physical.times.front()) > 1e-12)
        throw ValidationError("even_extend: physical trace must start at t = 0");
    size_t nt = physical.times.size();
    BoundaryTrace out;
    out.surface = physical.surface;
    out.even_extended = true;
    out.times.resize(2 * nt - 1);
    for (size_t m = 0; m < nt; ++m) {
        out.times[nt - 1 + m] = physical.times[m];
        out.times[nt - 1 - m] = -physical.times[m];
    }
    out.values.assign(physical.surface.size() * out.times.size(), 0.0);
    for (size_t j = 0; j < physical.surface.size(); ++j)
        for (size_t m = 0; m < nt; ++m) {
            double v = physical.at(j, m);
            out.values[out.idx(j, nt - 1 + m)] = v;
            out.values[out.idx(j, nt - 1 - m)] = v;
        }
    return out;
}

double ComplexTrace::norm_l2() const {
    double s = 0.0;
    for (size_t j = 0; j < surface.size(); ++j)
        for (size_t m = 0; m < times.size(); ++m)
            s += trace_weight(surface, times, j, m) * std::norm(values[idx(j, m)]);
    return std::sqrt(s);
}

ComplexTrace to_complex(const BoundaryTrace& t) {
    ComplexTrace out;
    out.surface = t.surface;
    out.times = t.times;
    out.values.assign(t.values.begin(), t.values.end());
    return out;
}

BoundaryTrace real_part(const ComplexTrace& t) {
    BoundaryTrace out;
    out.surface = t.surface;
    out.times = t.times;
    out.values.resize(t.values.size());
    for (size_t i = 0; i < t.values.size(); ++i) out.values[i] = t.values[i].real();
    return out;
}

double CutoffWindow::surface_factor(double w) const {
    if (full_surface) return 1.0;
    double x = w;
    if (periodic) {
        // measure relative to the support midpoint through the short way around
        double mid = 0.5 * (support_lo + support_hi);
        double d = std::fmod(x - mid, period);
        if (d < -period / 2) d += period;
        if (d > period / 2) d -= period;
        x = mid + d;
    }
    if (x <= support_lo || x >= support_hi) return 0.0;
    if (x < plateau_lo) return smooth_ramp((x - support_lo) / (plateau_lo - support_lo));
    if (x > plateau_hi) return smooth_ramp((support_hi - x) / (support_hi - plateau_hi));
    return 1.0;
}

double CutoffWindow::time_factor(double t) const {
    double a = std::abs(t);
    if (a <= t_plateau) return 1.0;
    if (a >= t_support) return 0.0;
    return smooth_ramp((t_support - a) / (t_support - t_plateau));
}

bool CutoffWindow::in_plateau(double w, double t) const {
    bool sp = full_surface;
    if (!sp) {
        double x = w;
        if (periodic) {
            double mid = 0.5 * (support_lo + support_hi);
            double d = std::fmod(x - mid, period);
            if (d < -period / 2) d += period;
            if (d > period / 2) d -= period;
            x = mid + d;
        }
        sp = x >= plateau_lo && x <= plateau_hi;
    }
    return sp && std::abs(t) <= t_plateau;
}

void CutoffWindow::validate() const {
    if (!full_surface) {
        if (!(support_lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < support_hi))
            throw ValidationError("window: need support_lo < plateau_lo <= plateau_hi < support_hi");
    }
    if (!(t_plateau > 0.0 && t_support > t_plateau))
        throw ValidationError("window: need 0 < t_plateau < t_support");
}

namespace {
template <typename T>
ComplexTrace windowed(const CutoffWindow& chi, const T& v) {
    ComplexTrace out;
    out.surface = v.surface;
    out.times = v.times;
    out.values.resize(v.surface.size() * v.times.size());
    for (size_t j = 0; j < v.surface.size(); ++j) {
        double w = v.surface.param[j];
        for (size_t m = 0; m < v.times.size(); ++m)
            out.values[out.idx(j, m)] =
                chi.value(w, v.times[m]) * cplx(v.values[v.idx(j, m)]);
    }
    return out;
}
}  // namespace

ComplexTrace apply_window(const CutoffWindow& chi, const ComplexTrace& v) {
    return windowed(chi, v);
}
ComplexTrace apply_window(const CutoffWindow& chi, const BoundaryTrace& v) {
    return windowed(chi, v);
}

double trace_weight(const SurfaceDesc& s, const std::vector<double>& times, size_t j, size_t m) {
    double w = s.spacing;
    if (!s.periodic && (j == 0 || j + 1 == s.size())) w *= 0.5;
    double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    double wt = dt;
    if (m == 0 || m + 1 == times.size()) wt *= 0.5;
    return w * wt;
}

cplx trace_inner(const ComplexTrace& u, const ComplexTrace& v) {
    if (u.values.size() != v.values.size()) throw Error("trace_inner: size mismatch");
    cplx s{};
    for (size_t j = 0; j < u.surface.size(); ++j)
        for (size_t m = 0; m < u.times.size(); ++m) {
            size_t i = u.idx(j, m);
            s += trace_weight(u.surface, u.times, j, m) * u.values[i] * std::conj(v.values[i]);
        }
    return s;
}

}  // namespace tat
