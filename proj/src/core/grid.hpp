#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace tat {

/// Uniform rectangular grid in 2 or 3 dimensions. Node i of axis a sits at
/// origin[a] + i*spacing[a]; values are stored row-major with the last axis
/// fastest.
struct Grid {
    std::vector<double> origin;
    std::vector<double> spacing;
    std::vector<size_t> shape;

    Grid() = default;
    Grid(std::vector<double> origin_, std::vector<double> spacing_, std::vector<size_t> shape_);

    size_t dim() const { return shape.size(); }
    size_t size() const;
    double min_spacing() const;

    // 2D conveniences (throw unless dim()==2).
    Vec2 origin2() const;
    Vec2 spacing2() const;
    size_t nx() const;  // shape[0], slow axis
    size_t ny() const;  // shape[1], fast axis
    size_t index2(size_t ix, size_t iy) const { return ix * shape[1] + iy; }
    Vec2 node2(size_t ix, size_t iy) const;
    Vec2 node2_flat(size_t flat) const;
    // Extent of the covered box, inclusive of the last node.
    Vec2 lower2() const { return origin2(); }
    Vec2 upper2() const;
    bool contains2(Vec2 p, double pad = 0.0) const;

    bool operator==(const Grid& g) const {
        return origin == g.origin && spacing == g.spacing && shape == g.shape;
    }
};

/// Real samples on a Grid, one value per node.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
    ScalarField(Grid g, std::vector<double> v);

    double& at(size_t ix, size_t iy) { return values[grid.index2(ix, iy)]; }
    double at(size_t ix, size_t iy) const { return values[grid.index2(ix, iy)]; }

    double max_abs() const;
    double l2() const;  // sqrt(h^2 * sum v^2), the discrete L2 norm
    void check_finite(const std::string& label) const;

    /// Bilinear interpolation at an arbitrary point (2D), clamped to the box.
    double sample2(Vec2 p) const;
};

double rel_l2_diff(const ScalarField& a, const ScalarField& b);

/// Raw export: little-endian float64, row-major (last axis fastest), plus a
/// text sidecar `<path>.meta` recording shape/origin/spacing.
void write_field_raw(const ScalarField& f, const std::string& path);
ScalarField read_field_raw(const std::string& path);

}  // namespace tat
