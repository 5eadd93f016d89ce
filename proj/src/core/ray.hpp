#pragma once

#include <optional>
#include <vector>

#include "core/common.hpp"
#include "core/geometry.hpp"
#include "core/sound_speed.hpp"

namespace tat {

/// A point of a bicharacteristic strip of p = tau^2 - c^2 |xi|^2.
struct PhasePoint {
    Vec2 x;
    Vec2 xi;
    double tau = 0.0;
    double t = 0.0;

    /// |p| relative to tau^2 + c^2|xi|^2.
    double on_shell_residual(const SoundSpeed& cs) const;
};

struct StripSample {
    double t = 0.0;
    Vec2 x;
    Vec2 xi;
    double phi = 0.0;     // carried phase value (constant along the ray)
    double a = 1.0;       // leading transport amplitude
    Mat2 jx;              // d x / d y
    Mat2 kx;              // d xi / d y
    Mat2 jeta;            // d x / d eta
    Mat2 keta;            // d xi / d eta
    double det_jx = 1.0;
};

/// Boundary crossing of a strip with the measured surface's manifold.
struct CrossingRecord {
    Vec2 x;               // crossing point
    double w = 0.0;       // boundary parameter of the crossing
    double t = 0.0;       // crossing time
    Vec2 xi;              // covector at the crossing
    double tau = 0.0;
    double normal_frac = 0.0;  // |xi . n| / |xi|
    bool glancing = false;
};

struct BicharStrip {
    int sign = +1;                     // +1 -> tau > 0, -1 -> tau < 0
    Vec2 seed_y;
    Vec2 seed_eta;
    double tau = 0.0;
    std::vector<StripSample> samples;  // time-ordered
    std::vector<CrossingRecord> crossings;
    bool truncated = false;            // left the computational box
    double max_hamiltonian_drift = 0.0;
};

struct RayOptions {
    double h_ode = 0.0;            // 0 -> min spacing / (4 c_max)
    bool variational = true;       // propagate the tangent flow and amplitude
    double box_pad = 1e9;          // allowed excursion outside the speed grid box
    double conj_det_eps = 0.05;    // |det dx/dy| threshold for degeneracy
};

double default_h_ode(const SoundSpeed& cs);

/// Incremental integrator for one strip. Time may advance in either
/// direction; uniform-speed stretches are stepped in closed form, bump
/// regions with classical RK4 at fixed step.
class RayIntegrator {
public:
    RayIntegrator(const SoundSpeed& cs, Vec2 y, Vec2 eta, int sign, RayOptions opts = {});

    void advance_to(double t_target);

    double t() const { return t_; }
    Vec2 x() const { return x_; }
    Vec2 xi() const { return xi_; }
    double tau() const { return tau_; }
    double phi() const { return phi_; }
    double amplitude() const { return a_; }
    const Mat2& jx() const { return J_; }
    const Mat2& kx() const { return K_; }
    const Mat2& jeta() const { return Je_; }
    const Mat2& keta() const { return Ke_; }
    int sign() const { return sign_; }
    double h_step() const { return h_; }
    Vec2 velocity() const;
    double hamiltonian() const;           // tau^2 - c^2 |xi|^2
    double hamiltonian_residual() const;  // relative form
    double max_drift() const { return max_drift_; }
    bool truncated() const { return truncated_; }

    /// Phase Hessian of the carried Lagrangian fan at the current point,
    /// K J^{-1}; meaningful while det J stays away from zero.
    Mat2 phase_hessian() const;
    double det_jx() const { return J_.det(); }
    /// First time |det dx/dy| dipped below the threshold, if it has.
    std::optional<double> first_degeneracy() const { return degeneracy_t_; }

    StripSample sample() const;

private:
    struct Deriv;
    Deriv rhs(Vec2 x, Vec2 xi, const Mat2& J, const Mat2& K, const Mat2& Je, const Mat2& Ke,
              double a) const;
    void rk4_step(double h);
    void uniform_jump(double dt);
    void post_step_checks();

    const SoundSpeed* cs_;
    int sign_;
    double tau_;
    std::array<double, 4> dtau_{};  // d tau for the (y1, y2, eta1, eta2) basis
    RayOptions opts_;
    double h_;
    double t_ = 0.0;
    Vec2 x_, xi_;
    Mat2 J_ = Mat2::identity(), K_ = Mat2::zero();
    Mat2 Je_ = Mat2::zero(), Ke_ = Mat2::identity();
    double a_ = 1.0;
    double phi_ = 0.0;
    double max_drift_ = 0.0;
    bool truncated_ = false;
    std::optional<double> degeneracy_t_;
};

/// Traces the strip over [t_lo, t_hi] (0 must be inside), sampling every
/// record_dt, and records boundary crossings of the geometry's surface
/// manifold when geom != nullptr.
BicharStrip trace_bichar(Vec2 y, Vec2 eta_hat, int sign, const SoundSpeed& cs, double t_lo,
                         double t_hi, double record_dt, const DomainGeometry* geom = nullptr,
                         RayOptions opts = {});

/// All crossings of the strip from (y, eta_hat) with the surface manifold
/// within |t| <= T, ordered by increasing t. At most one per time sign for
/// the supported geometries (asserted). Crossing time accuracy ~ h_ode^2.
std::vector<CrossingRecord> endpoint_crossings(Vec2 y, Vec2 eta_hat, int sign,
                                               const SoundSpeed& cs, const DomainGeometry& geom,
                                               double T, RayOptions opts = {},
                                               double glancing_threshold = 0.05);

/// First time |det dx/dy| < eps along the strip, if any.
std::optional<double> conjugate_point_monitor(const BicharStrip& strip, double eps = 0.05);

}  // namespace tat
