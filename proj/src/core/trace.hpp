#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/fft_utils.hpp"
#include "core/geometry.hpp"

namespace tat {

/// Measured data: real samples on surface x time. Physical recordings live on
/// t in [0, T]; the even extension mirrors them onto [-T, T] (valid because
/// the initial time derivative vanishes, making the free solution even in t).
struct BoundaryTrace {
    SurfaceDesc surface;
    std::vector<double> times;
    std::vector<double> values;  // [surf][time]
    bool even_extended = false;

    size_t idx(size_t j, size_t m) const { return j * times.size() + m; }
    double& at(size_t j, size_t m) { return values[idx(j, m)]; }
    double at(size_t j, size_t m) const { return values[idx(j, m)]; }

    double rel_l2_diff(const BoundaryTrace& ref) const;
    void check_even_symmetry() const;  // throws unless mirrored exactly
    void export_raw(const std::string& path_prefix) const;
};

/// Mirrors a physical trace (times [0, T]) onto the two-sided axis [-T, T].
BoundaryTrace even_extend(const BoundaryTrace& physical);

/// Complex-valued trace used by the one-sided oscillatory operators.
struct ComplexTrace {
    SurfaceDesc surface;
    std::vector<double> times;
    std::vector<cplx> values;

    size_t idx(size_t j, size_t m) const { return j * times.size() + m; }
    double norm_l2() const;
};

ComplexTrace to_complex(const BoundaryTrace& t);
BoundaryTrace real_part(const ComplexTrace& t);

/// Smooth data cutoff chi(w', t) = surface taper x time taper, identically 1
/// on the plateau V and 0 outside the support; quintic smoothstep ramps keep
/// complementary windows an exact partition.
struct CutoffWindow {
    // surface factor: 0 outside [support_lo, support_hi], 1 on [plateau_lo, plateau_hi]
    double support_lo = 0.0, plateau_lo = 0.0, plateau_hi = 0.0, support_hi = 0.0;
    bool full_surface = false;    // surface factor identically 1 (full circle)
    bool periodic = false;
    double period = 0.0;          // boundary parameter period when periodic
    // time factor: 1 on |t| <= t_plateau, 0 beyond t_support
    double t_plateau = 0.0, t_support = 0.0;

    double surface_factor(double w) const;
    double time_factor(double t) const;
    double value(double w, double t) const { return surface_factor(w) * time_factor(t); }
    bool in_plateau(double w, double t) const;
    void validate() const;
};

/// chi applied sample-wise: out(j, m) = chi(w_j, t_m) * v(j, m).
ComplexTrace apply_window(const CutoffWindow& chi, const ComplexTrace& v);
ComplexTrace apply_window(const CutoffWindow& chi, const BoundaryTrace& v);

/// Quadrature weight of sample (j, m) on surface x time (trapezoid in both
/// axes; surface ends get half weight only on non-periodic surfaces).
double trace_weight(const SurfaceDesc& s, const std::vector<double>& times, size_t j, size_t m);

/// <u, v> with the trace quadrature weights (conjugate-linear in v).
cplx trace_inner(const ComplexTrace& u, const ComplexTrace& v);

}  // namespace tat
