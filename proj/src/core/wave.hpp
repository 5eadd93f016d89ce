#pragma once

#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/sound_speed.hpp"
#include "core/trace.hpp"

namespace tat {

struct WaveOptions {
    double cfl_factor = 0.8;  // dt = cfl * h / (c_max * sqrt(2)); must stay <= 0.9
    double extra_pad = 0.1;   // box margin beyond c_max * T
    size_t frame_stride = 0;  // record interior frames every k-th output (0 = off)
    int n_threads = 0;
};

struct WaveResult {
    BoundaryTrace trace;          // physical times [0, T]
    double energy_drift = 0.0;    // max relative drift over the run
    std::vector<ScalarField> frames;  // optional movie frames on the input grid
    std::vector<double> frame_times;
};

/// Second-order leapfrog in time, 4th-order 9-point Laplacian in space, on a
/// box enlarged so nothing reflected returns before T. The first step uses
/// u1 = u0 + dt^2/2 c^2 lap u0 (consistent with zero initial velocity).
WaveResult solve_forward(const ScalarField& f, const SoundSpeed& cs, double T,
                         const DomainGeometry& geom, const SurfaceDesc& surface,
                         const std::vector<double>& out_times, WaveOptions opts = {});

/// Closed-form constant-speed reference: u\hat(eta, t) = f\hat(eta) cos(t |eta|)
/// evaluated by FFT synthesis on the same enlarged box. Only valid for c == 1.
BoundaryTrace solve_spectral_const(const ScalarField& f, double T, const DomainGeometry& geom,
                                   const SurfaceDesc& surface, const std::vector<double>& out_times,
                                   double extra_pad = 0.1);

/// Full-field spectral solution at one time (test support).
ScalarField spectral_field_const(const ScalarField& f, double t, double extra_pad = 0.1);

struct PacketTrack {
    std::vector<double> times;
    std::vector<Vec2> centroid_plus;   // branch moving along -c eta_hat
    std::vector<Vec2> centroid_minus;  // branch moving along +c eta_hat
};

/// Evolves a Gaussian wave packet (zero initial velocity, so the energy
/// splits evenly between the two bicharacteristic branches) and tracks the
/// envelope centroids of both halves.
PacketTrack trace_wavepacket(Vec2 center, Vec2 dir, double carrier, double sigma,
                             const SoundSpeed& cs, double T, size_t n_out,
                             WaveOptions opts = {});

}  // namespace tat
