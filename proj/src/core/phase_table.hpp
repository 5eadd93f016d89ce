#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/sound_speed.hpp"

namespace tat {

/// Sampled geometrical-optics phase and leading amplitude on the measurement
/// surface: phi(w', t, eta_hat) and a(w', t, eta_hat) for unit directions.
/// Evaluation at eta = r * eta_hat uses the homogeneous extension: phi scales
/// by r, a is unchanged.
class PhaseAmpTable {
public:
    PhaseAmpTable() = default;
    PhaseAmpTable(int sign, SurfaceDesc surface, std::vector<double> times, size_t n_dirs);

    int sign() const { return sign_; }
    const SurfaceDesc& surface() const { return surface_; }
    const std::vector<double>& times() const { return times_; }
    size_t n_surf() const { return surface_.size(); }
    size_t n_times() const { return times_.size(); }
    size_t n_dirs() const { return n_dirs_; }
    double dt() const { return times_.size() > 1 ? times_[1] - times_[0] : 0.0; }
    double t_horizon() const { return times_.empty() ? 0.0 : std::abs(times_.back()); }
    Vec2 dir(size_t bin) const {
        double ang = kTwoPi * static_cast<double>(bin) / static_cast<double>(n_dirs_);
        return {std::cos(ang), std::sin(ang)};
    }

    size_t idx(size_t j, size_t m, size_t k) const { return (j * times_.size() + m) * n_dirs_ + k; }

    // per-entry storage (unit |eta|)
    std::vector<double> phi;
    std::vector<double> amp;
    std::vector<float> grad_w;   // tangential derivative of phi along the surface
    std::vector<float> grad_n;   // normal derivative of phi
    std::vector<float> dphi_dt;  // time derivative of phi (tau of the arriving ray)
    std::vector<uint8_t> valid;

    /// Homogeneous evaluation: phase and amplitude at eta = r * dir(bin).
    double phase_at(size_t j, size_t m, size_t k, double r) const { return r * phi[idx(j, m, k)]; }
    double amp_at(size_t j, size_t m, size_t k, double /*r*/) const { return amp[idx(j, m, k)]; }

    bool row_valid(size_t j, size_t m) const;
    /// Bilinear amplitude lookup at a crossing (w, t) for one direction bin;
    /// false when outside the axes or any corner entry is invalid.
    bool amp_lookup(double w, double t, size_t bin, double& out) const;
    double coverage() const;  // fraction of valid entries
    bool partial = false;     // set when the fan left gaps

    /// |d_t phi|^2 - c^2 |grad phi|^2 relative to c^2 |grad phi|^2, maximized
    /// over valid entries, with grad phi taken from the interpolated covector.
    double eikonal_residual_max(const SoundSpeed& cs) const;
    /// min over valid entries of |grad_x phi| (the measured nonvanishing
    /// constant of the phase family).
    double grad_lower_bound(const SoundSpeed& cs) const;
    /// max over valid entries of |phi(x',0,eta) - <x',eta>| (initial data).
    double initial_phase_error() const;
    double initial_amp_error() const;
    /// Checks d_t phi^+ > 0 > d_t phi^- across valid entries.
    bool time_derivative_sign_ok() const;

    void export_raw(const std::string& path_prefix) const;

private:
    int sign_ = +1;
    SurfaceDesc surface_;
    std::vector<double> times_;
    size_t n_dirs_ = 0;
};

/// Uniform two-sided time axis [-T, T] with 2*n_half+1 samples.
std::vector<double> two_sided_times(double T, size_t n_half);

}  // namespace tat
