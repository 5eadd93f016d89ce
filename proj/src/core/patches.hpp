#pragma once

#include <vector>

#include "core/common.hpp"
#include "core/fio.hpp"
#include "core/geometry.hpp"
#include "core/trace.hpp"
#include "core/visibility.hpp"

namespace tat {

/// Boundary normal coordinates near one patch: (w', w_n) with w' the boundary
/// parameter (arc length) and w_n the signed normal distance, region of
/// interest on w_n < 0. For the circle the chart is analytic; for the
/// half-space it is the identity chart.
struct BoundaryChart {
    DomainGeometry geom;
    size_t patch_id = 0;
    double w_lo = 0.0, w_hi = 0.0;  // parameter range covered (window support)

    Vec2 from_chart(double w, double wn) const;
    std::pair<double, double> to_chart(Vec2 x) const;  // (w', w_n)
    /// |det d x / d(w', w_n)|; bounded away from zero on the chart's slab.
    double metric_jacobian(double w, double wn) const;
};

/// Patch decomposition of the measured boundary arc: overlapping smooth
/// cutoffs chi_j with sum_j chi_j = 1 on GammaTilde x [-t_part, t_part].
struct PatchSystem {
    DomainGeometry geom;
    size_t n_patches = 0;
    double t_part = 0.0;    // partition time plateau
    double t_data = 0.0;    // data horizon (window support end)
    std::vector<BoundaryChart> charts;
    std::vector<CutoffWindow> chi;

    double chi_sum(double w, double t) const;
};

/// Equal arc-length patches with complementary quintic ramps. taper_frac is
/// the overlap fraction of the patch width; for a partial arc the edge ramps
/// must fit inside Gamma \ GammaTilde (error otherwise).
PatchSystem build_patch_system(const DomainGeometry& geom, size_t n_patches, double taper_frac,
                               double t_part, double t_data);

/// One patch of the combined parametrix: the generic windowed pipeline run
/// with chi_j and the patch's own symbol correction.
ScalarField patch_reconstruct(size_t j, const BoundaryTrace& data, const PatchSystem& system,
                              const FioOperator& s_plus, const FioOperator& s_minus,
                              const CorrectionOp& r_plus, const CorrectionOp& r_minus);

/// Applies theta_j (cone filter) to each patch output and sums.
ScalarField combine_patches(const std::vector<ScalarField>& patch_fields,
                            const std::vector<ConeMask>& theta);

/// Combining partition theta_j from per-patch sign cones, normalized to sum
/// to one on the visibility set U (where any patch sees the bin).
std::vector<ConeMask> build_patch_theta(const std::vector<SignSymbolData>& plus,
                                        const std::vector<SignSymbolData>& minus);

/// Per-patch principal symbols and sign cones from a single crossing sweep
/// per sign (each crossing is weighted by every patch cutoff).
std::pair<std::vector<SignSymbolData>, std::vector<SignSymbolData>> compute_patch_b0(
    const PhaseAmpTable& table_plus, const PhaseAmpTable& table_minus, const PatchSystem& system,
    const SoundSpeed& cs, const Grid& zgrid, size_t n_dirs, double T,
    VisibilityOptions vis_opts = {}, RayOptions ray_opts = {});

}  // namespace tat
