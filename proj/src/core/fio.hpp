#pragma once

#include <memory>
#include <vector>

#include "core/common.hpp"
#include "core/fft_utils.hpp"
#include "core/grid.hpp"
#include "core/nufft.hpp"
#include "core/phase_table.hpp"
#include "core/trace.hpp"
#include "core/visibility.hpp"

namespace tat {

/// Polar frequency quadrature shared by the oscillatory operators: radial
/// nodes r_m = m * dr up to r_max (trapezoid), angles 2 pi q / n_quad
/// (trapezoid, exact for periodic integrands), nodes evaluated with the
/// nonuniform FFT against the field grid.
struct PolarQuadrature {
    Grid fgrid;
    size_t n_quad = 0;
    size_t n_radial = 0;
    double dr = 0.0;
    double r_max = 0.0;
    std::shared_ptr<NonuniformFT> nuft;  // node order: [q][m], m fastest

    static PolarQuadrature make(const Grid& fgrid, size_t n_quad, double r_max, double dr);
    double radial_weight(size_t m_index) const {  // includes the r dr factor
        double r = dr * static_cast<double>(m_index + 1);
        double w = (m_index + 1 == n_radial) ? 0.5 * dr : dr;
        return r * w;
    }
    double dtheta() const { return kTwoPi / static_cast<double>(n_quad); }
};

/// Discretized one-sided solution operator S_sign (table-driven oscillatory
/// sum over the polar quadrature) and its exact discrete adjoint.
class FioOperator {
public:
    FioOperator(const PhaseAmpTable* table, const PolarQuadrature* quad);

    const PhaseAmpTable& table() const { return *table_; }
    const PolarQuadrature& quad() const { return *quad_; }

    /// (S f)(x', t); f must be supported in the region of interest.
    ComplexTrace apply(const ScalarField& f) const;
    ComplexTrace apply(const std::vector<cplx>& f_complex) const;
    /// Exact adjoint w.r.t. the trace quadrature and grid inner products.
    std::vector<cplx> apply_adjoint(const ComplexTrace& v) const;

private:
    void upsample_row(size_t j, size_t m, std::vector<double>& phi_up,
                      std::vector<double>& amp_up) const;

    const PhaseAmpTable* table_;
    const PolarQuadrature* quad_;
};

/// Principal symbol of the one-sided normal operator: b0(z, eta) summed over
/// the (at most two) window crossings of gamma^sign from (z, eta).
struct SymbolTable {
    Grid grid;
    size_t n_dirs = 0;
    std::vector<float> b0;
    double eps_b = 0.0;  // regularization floor for the inversion

    size_t idx(size_t node, size_t bin) const { return node * n_dirs + bin; }
    double max_b0() const;
};

/// One sweep of the phase-space bins producing both the principal symbol and
/// the sign cone (window-weighted, glancing-tapered visibility of this sign).
struct SignSymbolData {
    SymbolTable b0;
    ConeMask cone;
};

SignSymbolData compute_b0(int sign, const PhaseAmpTable& table, const CutoffWindow& chi,
                          const SoundSpeed& cs, const DomainGeometry& geom, const Grid& zgrid,
                          size_t n_dirs, double T, VisibilityOptions vis_opts = {},
                          RayOptions ray_opts = {});

/// Cone-wise spatially varying Fourier multiplier (direction bins partition
/// the frequency plane; per bin the field is band-passed and weighted in
/// space). `mult` is [node x bin].
std::vector<cplx> cone_multiply(const std::vector<cplx>& field, const Grid& grid,
                                const std::vector<float>& mult, size_t n_dirs);

/// Same machinery applied to a real field with a ConeMask weight, plus an
/// optional radial band limit exp(-(r/r_cut)^8) and optional complement.
ScalarField phase_space_filter(const ScalarField& f, const ConeMask& mask, double r_cut = 0.0);

/// Elliptic correction: theta(z, eta) / max(b0(z, eta), eps_b) applied as a
/// cone multiplier.
struct CorrectionOp {
    SymbolTable b0;
    ConeMask theta;
    std::vector<float> multiplier() const;
};

/// theta_plus/theta_minus: normalized partition over the two sign cones,
/// tapered to vanish where b0 is at the regularization floor.
std::pair<ConeMask, ConeMask> build_theta_pair(const SignSymbolData& plus,
                                               const SignSymbolData& minus);

/// R+ S+* chi d + R- S-* chi d for even-extended data; real part returned.
ScalarField reconstruct_hyperplane(const BoundaryTrace& data, const FioOperator& s_plus,
                                   const FioOperator& s_minus, const CutoffWindow& chi,
                                   const CorrectionOp& r_plus, const CorrectionOp& r_minus);

struct CrossTermReport {
    std::vector<double> carriers;
    std::vector<double> ratios;  // |S+* chi S- f_k| / |S+* chi S+ f_k|
    double fit_exponent = 0.0;
};

CrossTermReport cross_term_residual(const FioOperator& s_plus, const FioOperator& s_minus,
                                    const CutoffWindow& chi,
                                    const std::vector<ScalarField>& probes,
                                    const std::vector<double>& carriers);

/// Band-limited coherent probe: Gaussian envelope times a plane carrier.
ScalarField gaussian_packet(const Grid& g, Vec2 center, Vec2 dir, double carrier, double sigma);

double field_l2(const std::vector<cplx>& f, const Grid& g);

}  // namespace tat
