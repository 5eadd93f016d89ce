#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"

namespace tat {

/// One phantom primitive. `smooth_width` = 0 gives a sharp indicator; a
/// positive width ramps the jump over that distance (still compactly
/// supported).
struct PhantomPrimitive {
    std::string type = "disk";       // disk | polygon
    double amplitude = 1.0;
    // disk
    Vec2 center{0.0, 0.0};
    double radius = 0.0;
    double smooth_width = 0.0;
    // polygon (simple, counterclockwise or clockwise)
    std::vector<Vec2> vertices;
};

/// A piece of the phantom's analytic edge set: a short arc/segment element
/// with its outward unit normal. The conormal directions of the jump at this
/// element are +/- normal.
struct EdgeSegment {
    Vec2 position;
    Vec2 normal;
    double length = 0.0;
    size_t primitive = 0;
};

struct Phantom {
    ScalarField field;                // sum of primitive indicators
    std::vector<EdgeSegment> edges;   // analytic edge elements
};

/// Sum of primitive indicators sampled on the grid; every primitive must be
/// contained in the region of interest. `edge_samples` controls how finely
/// the analytic edge set is discretized for the metrics.
Phantom make_phantom(const std::vector<PhantomPrimitive>& spec, const Grid& grid,
                     const DomainGeometry& geom, size_t edge_samples_per_primitive = 64);

/// Gaussian blur with standard deviation sigma_cells * min grid spacing;
/// used for the band-limited variants needed by norm-level comparisons.
ScalarField mollify(const ScalarField& f, double sigma_cells);

}  // namespace tat
