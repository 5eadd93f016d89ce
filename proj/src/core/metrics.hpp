#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/grid.hpp"
#include "core/phantom.hpp"
#include "core/visibility.hpp"

namespace tat {

struct EdgeScoreOptions {
    double smooth_sigma_cells = 2.0;   // band-limit applied to both fields
    double stencil_halflen_cells = 5.0;
    size_t stencil_samples = 11;
    double shift_scan_cells = 3.0;     // localization search range
    double visibility_cut = 0.5;       // mask weight above which a conormal counts visible
};

struct EdgeSegmentScore {
    Vec2 position;
    Vec2 normal;
    bool visible = false;
    double score = 0.0;         // in [-1, 1]
    double localization = 0.0;  // |offset| of the response peak, length units
};

struct EdgeReport {
    std::vector<EdgeSegmentScore> segments;
    double min_visible_score = 0.0;
    double max_invisible_score = 0.0;
    double max_visible_localization = 0.0;
    size_t n_visible = 0;
    size_t n_invisible = 0;

    void finalize();
    void export_csv(const std::string& path) const;
};

/// Scores the reconstruction's band-limited second-derivative response across
/// each analytic edge element against the same response of the reference
/// field; score = normalized correlation gated by the relative response
/// amplitude (so a missing edge cannot score high on shape alone). Visibility
/// flags come only from the supplied ray-derived mask.
EdgeReport edge_recovery_score(const ScalarField& reconstruction, const ScalarField& reference,
                               const std::vector<EdgeSegment>& edges, const ConeMask& visibility,
                               EdgeScoreOptions opts = {});

}  // namespace tat
