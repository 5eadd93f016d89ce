#pragma once

#include <functional>
#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/ray.hpp"
#include "core/sound_speed.hpp"

namespace tat {

/// Phase-space weight on (grid node) x (direction bin). Direction bin k is
/// the unit covector at angle 2 pi k / n_dirs; bins partition the circle.
struct ConeMask {
    Grid grid;
    size_t n_dirs = 0;
    std::vector<float> weights;  // [node * n_dirs + bin], values in [0, 1]

    ConeMask() = default;
    ConeMask(Grid g, size_t nd)
        : grid(std::move(g)), n_dirs(nd), weights(grid.size() * nd, 0.0f) {}

    double weight(size_t node, size_t bin) const { return weights[node * n_dirs + bin]; }
    void set(size_t node, size_t bin, double v) {
        weights[node * n_dirs + bin] = static_cast<float>(v);
    }
    Vec2 dir(size_t bin) const {
        double ang = kTwoPi * static_cast<double>(bin) / static_cast<double>(n_dirs);
        return {std::cos(ang), std::sin(ang)};
    }
    size_t bin_of(Vec2 d) const;
    size_t opposite_bin(size_t bin) const { return (bin + n_dirs / 2) % n_dirs; }
    /// Weight at an arbitrary phase-space point (nearest node, nearest bin).
    double weight_at(Vec2 p, Vec2 d) const;
};

struct VisibilityOptions {
    double glancing_threshold = 0.05;  // |xi_n|/|xi| below this is excluded
    double angular_margin = 0.04;      // smooth taper width above the threshold
    double t_horizon = 0.0;            // 0 -> geometry T_max
    bool restrict_to_measured = true;  // crossings must land on the measured patch
};

/// Glancing taper: 0 at or below the threshold, 1 once the margin is cleared.
double glancing_taper(double normal_frac, const VisibilityOptions& opts);

/// True when the crossing parameter w lies on the measured patch
/// (the recorded segment for a half-space, the inner arc for a convex body).
bool crossing_on_measured(const DomainGeometry& geom, double w);

/// Traces gamma^sign from every (node, bin) seed and hands the crossings
/// (possibly empty) to the callback. Parallel over nodes; the callback must
/// only write state owned by (node, bin, sign).
void sweep_crossings(const Grid& grid, size_t n_dirs, const SoundSpeed& cs,
                     const DomainGeometry& geom, double T, const std::vector<int>& signs,
                     const std::function<void(size_t node, size_t bin, int sign,
                                              const std::vector<CrossingRecord>&)>& cb,
                     RayOptions ray_opts = {});

/// The visibility set: weight 1 where gamma^+ or gamma^- crosses the measured
/// set non-glancingly within the horizon, tapered to 0 over the angular
/// margin.
ConeMask classify_visibility(const Grid& grid, size_t n_dirs, const SoundSpeed& cs,
                             const DomainGeometry& geom, const std::vector<int>& signs,
                             VisibilityOptions opts = {});

struct InjectivityReport {
    bool pass = false;
    double min_separation = 0.0;  // scale-normalized distance between endpoint tuples
    size_t n_endpoints = 0;
    size_t n_no_crossing = 0;
    std::vector<std::pair<size_t, size_t>> collisions;  // direction index pairs
};

/// Checks that distinct directions from one seed give distinct endpoint data
/// (x', t, xi', tau); near-collisions indicate conjugate points or glancing.
InjectivityReport check_endpoint_injectivity(Vec2 seed, const std::vector<Vec2>& dirs, int sign,
                                             const SoundSpeed& cs, const DomainGeometry& geom,
                                             double T, double margin = 1e-3,
                                             RayOptions ray_opts = {});

}  // namespace tat
