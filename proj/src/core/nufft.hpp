#pragma once

#include <complex>
#include <vector>

#include "core/common.hpp"
#include "core/fft_utils.hpp"
#include "core/grid.hpp"

namespace tat {

/// Nonuniform FFT between a 2D spatial grid and arbitrary frequency nodes,
/// continuum Fourier convention:
///     forward:  values[l] = h^2 sum_y f(y) exp(-i <y, eta_l>)
///     adjoint:  exact conjugate-transpose of forward w.r.t. plain sums.
/// Oversampled FFT plus exponential-of-semicircle gridding; accuracy is set
/// by the kernel half-width (default ~1e-9 relative).
class NonuniformFT {
public:
    NonuniformFT(Grid grid, std::vector<Vec2> nodes, int half_width = 8);

    size_t n_nodes() const { return nodes_.size(); }
    const Grid& grid() const { return grid_; }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    /// field (grid.size() complex) -> values (n_nodes complex)
    void forward(const cplx* field, cplx* values) const;
    /// values -> field, the exact adjoint of forward
    void adjoint(const cplx* values, cplx* field) const;

    /// Direct evaluation for verification (O(N * M)).
    void forward_direct(const cplx* field, cplx* values) const;

private:
    struct NodeInterp {
        long base0 = 0, base1 = 0;    // first fine-grid tap per axis (unwrapped)
        std::vector<double> w0, w1;   // kernel taps per axis
        cplx phase;                   // h^2 * exp(-i <y0, eta>)
    };

    Grid grid_;
    std::vector<Vec2> nodes_;
    int hw_;
    size_t nf0_, nf1_;               // fine (oversampled) grid
    std::vector<double> deconv0_, deconv1_;  // spatial prefactors 1/phihat
    std::vector<NodeInterp> interp_;
};

}  // namespace tat
