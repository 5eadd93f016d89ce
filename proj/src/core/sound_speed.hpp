#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"

namespace tat {

/// One compactly supported speed perturbation: c gains
/// amplitude * (1 - (r/radius)^2)^6 inside the disk of the given radius.
/// The profile has five continuous derivatives at the support edge, enough
/// for the ray right-hand side and its linearization.
struct SpeedBump {
    Vec2 center{0.0, 0.0};
    double radius = 0.0;
    double amplitude = 0.0;
};

/// Sound speed c(x): 1 outside the region of interest, smooth bumps inside,
/// bounded in (1/M, M). Carries both a sampled field and the analytic model
/// (rays need exact grad/Hessian of c^2).
class SoundSpeed {
public:
    SoundSpeed() = default;
    SoundSpeed(std::vector<SpeedBump> bumps, Grid grid, double bound_M,
               std::string support_desc);

    double c(Vec2 p) const;
    double c2(Vec2 p) const { double v = c(p); return v * v; }
    Vec2 grad_c(Vec2 p) const;
    Vec2 grad_c2(Vec2 p) const;
    Mat2 hess_c2(Vec2 p) const;

    double c_max() const { return c_max_; }
    double c_min() const { return c_min_; }
    double bound_M() const { return bound_M_; }
    bool is_constant() const { return bumps_.empty(); }
    const std::vector<SpeedBump>& bumps() const { return bumps_; }
    const ScalarField& field() const { return field_; }
    const std::string& support_region() const { return support_desc_; }

    /// True when the straight segment p -> p + dir*len stays clear of every
    /// bump support (with margin); on such segments the flow is the constant
    /// speed closed form.
    bool segment_uniform(Vec2 p, Vec2 dir_unit, double len, double margin) const;
    bool point_uniform(Vec2 p, double margin) const;

    /// Machine-checkable invariant suite: bounds, exterior-equals-one within
    /// tol, discrete Laplacian bound. Throws ValidationError on failure.
    void check_invariants(const DomainGeometry& geom, double exterior_tol = 1e-12) const;

private:
    std::vector<SpeedBump> bumps_;
    ScalarField field_;
    double bound_M_ = 2.0;
    double c_max_ = 1.0;
    double c_min_ = 1.0;
    std::string support_desc_;
};

struct SoundSpeedModel {
    std::string name = "constant";     // constant | radial-bump | multi-bump
    std::vector<SpeedBump> bumps;      // used by the bump models
    double bound_M = 2.0;
};

/// Builds a SoundSpeed and enforces its invariants. Bumps whose support
/// escapes the region of interest are rejected with a diagnostic.
SoundSpeed make_sound_speed(const SoundSpeedModel& model, const Grid& grid,
                            const DomainGeometry& geom);

}  // namespace tat
