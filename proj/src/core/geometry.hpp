#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/grid.hpp"

namespace tat {

/// Measurement geometry. Two kinds:
///  - HalfSpace: the region of interest sits in {y < 0}, the measurement
///    surface is the line {y = 0}, data is recorded on a finite segment.
///  - ConvexBody: a disk (strictly convex), data recorded on a boundary arc
///    Gamma; the inner arc GammaTilde is compactly contained in Gamma.
struct DomainGeometry {
    enum class Kind { HalfSpace, ConvexBody };

    Kind kind = Kind::HalfSpace;
    double t_max = 1.0;

    // HalfSpace: measured segment [surface_lo, surface_hi] on {y = 0}.
    double surface_lo = -1.0;
    double surface_hi = 1.0;

    // ConvexBody: circle of radius `radius` about `center`; arcs are angle
    // intervals in radians (counterclockwise; full circle = [0, 2*pi)).
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    double gamma_lo = 0.0, gamma_hi = kTwoPi;
    double gamma_tilde_lo = 0.0, gamma_tilde_hi = kTwoPi;

    static DomainGeometry half_space(double lo, double hi, double t_max);
    static DomainGeometry convex_body(Vec2 center, double radius, double gamma_lo,
                                      double gamma_hi, double tilde_lo, double tilde_hi,
                                      double t_max);

    bool full_circle() const;
    /// Signed boundary defining function: negative inside the region that
    /// contains the initial data, zero on the measured surface's manifold.
    double boundary_defining(Vec2 p) const;
    Vec2 boundary_normal(Vec2 p) const;  // outward unit normal at a surface point
    bool in_omega(Vec2 p, double margin = 0.0) const;
    void validate() const;
};

/// Discretized measurement surface: an ordered list of samples with boundary
/// parameter w' (length units), position, outward normal and unit tangent.
/// Quadrature weight is the parameter spacing (trapezoid ends are handled by
/// the cutoff windows vanishing there).
struct SurfaceDesc {
    DomainGeometry geometry;
    std::vector<double> param;      // w' per sample
    std::vector<Vec2> position;
    std::vector<Vec2> normal;
    std::vector<Vec2> tangent;
    double spacing = 0.0;           // uniform parameter step
    bool periodic = false;          // full-circle boundary

    size_t size() const { return param.size(); }
    /// Map a surface point to its parameter value.
    double param_of(Vec2 p) const;
    Vec2 position_of(double w) const;
};

SurfaceDesc make_surface(const DomainGeometry& geom, size_t n_samples);

}  // namespace tat
