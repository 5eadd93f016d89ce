#pragma once

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/phase_table.hpp"
#include "core/ray.hpp"
#include "core/sound_speed.hpp"

namespace tat {

/// Raised when the ray-map Jacobian degenerates along a strip that feeds the
/// table; carries the monitor's located degeneracy time.
class ConjugatePointError : public Error {
public:
    ConjugatePointError(double t_degen, Vec2 seed, Vec2 dir)
        : Error("conjugate point: |det dx/dy| degenerated at t = " + std::to_string(t_degen) +
                " on the strip from " + format_vec(seed) + " direction " + format_vec(dir)),
          t_degenerate(t_degen), seed_y(seed), seed_dir(dir) {}
    double t_degenerate;
    Vec2 seed_y;
    Vec2 seed_dir;
};

struct FanOptions {
    double fan_spacing = 0.0;          // 0 -> 2 x min grid spacing of the speed grid
    double interp_radius_factor = 1.5; // deposit radius in units of fan_spacing
    size_t min_rays_per_entry = 2;
    double coverage_threshold = 0.995; // below this fraction the table is flagged partial
    RayOptions ray;
    int n_threads = 0;
};

/// Lagrangian-fan construction of the surface phase/amplitude table for one
/// sign. For each direction a fan of strips with plane-wave initial covector
/// carries phi (constant along each strip), xi, the phase Hessian and the
/// transported amplitude; entries are scatter-interpolated onto the surface
/// samples with an inverse-distance weight inside the interpolation radius,
/// sharpened by the carried first/second-order ray data.
PhaseAmpTable build_phase_table(int sign, const SoundSpeed& cs, const DomainGeometry& geom,
                                const SurfaceDesc& surface, const std::vector<double>& times,
                                size_t n_dirs, FanOptions opts = {});

/// Interior geometrical-optics data for one direction on a small box: used by
/// the transport-residual diagnostics.
struct VolumeProbe {
    Grid box;
    std::vector<double> times;
    Vec2 eta_hat;
    int sign = +1;
    std::vector<double> phi, a, xix, xiy, tau, hxx, hxy, hyy;
    std::vector<uint8_t> valid;
    size_t idx(size_t node, size_t m) const { return node * times.size() + m; }
};

VolumeProbe build_volume_probe(int sign, const SoundSpeed& cs, Vec2 eta_hat, const Grid& box,
                               const std::vector<double>& times, FanOptions opts = {});

}  // namespace tat
