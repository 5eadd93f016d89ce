#include "core/nufft.hpp"

#include <cmath>

namespace tat {

namespace {

// exponential-of-semicircle window on [-1, 1]
inline double es_kernel(double z, double beta) {
    double u = 1.0 - z * z;
    if (u <= 0.0) return 0.0;
    return std::exp(beta * (std::sqrt(u) - 1.0));
}

// K\hat(xi) = int_{-hw}^{hw} k(u/hw) e^{i u xi} du, real and even in xi.
double kernel_ft(double xi, int hw, double beta) {
    const int nq = 2000;
    double h = static_cast<double>(hw) / nq;
    double acc = 0.0;
    for (int i = 0; i <= nq; ++i) {
        double u = h * i;
        double w = (i == 0 || i == nq) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * es_kernel(u / hw, beta) * std::cos(u * xi);
    }
    return 2.0 * acc * h / 3.0;
}

}  // namespace

NonuniformFT::NonuniformFT(Grid grid, std::vector<Vec2> nodes, int half_width)
    : grid_(std::move(grid)), nodes_(std::move(nodes)), hw_(half_width) {
    if (grid_.dim() != 2) throw ValidationError("nufft: 2D grids only");
    size_t n0 = grid_.nx(), n1 = grid_.ny();
    nf0_ = 2 * n0;
    nf1_ = 2 * n1;
    double beta = 2.30 * hw_;

    deconv0_.resize(n0);
    deconv1_.resize(n1);
    for (size_t i = 0; i < n0; ++i) {
        long s = static_cast<long>(i) - static_cast<long>(n0 / 2);
        deconv0_[i] = 1.0 / kernel_ft(kTwoPi * static_cast<double>(s) / static_cast<double>(nf0_),
                                      hw_, beta);
    }
    for (size_t i = 0; i < n1; ++i) {
        long s = static_cast<long>(i) - static_cast<long>(n1 / 2);
        deconv1_[i] = 1.0 / kernel_ft(kTwoPi * static_cast<double>(s) / static_cast<double>(nf1_),
                                      hw_, beta);
    }

    double h0 = grid_.spacing[0], h1 = grid_.spacing[1];
    Vec2 yc = grid_.node2(n0 / 2, n1 / 2);
    double cell = h0 * h1;
    interp_.resize(nodes_.size());
    for (size_t l = 0; l < nodes_.size(); ++l) {
        Vec2 eta = nodes_[l];
        double nu0 = eta.x * h0 * static_cast<double>(nf0_) / kTwoPi;
        double nu1 = eta.y * h1 * static_cast<double>(nf1_) / kTwoPi;
        if (std::abs(nu0) > static_cast<double>(nf0_) / 2.0 - hw_ - 1 ||
            std::abs(nu1) > static_cast<double>(nf1_) / 2.0 - hw_ - 1)
            throw ValidationError("nufft: frequency node beyond the oversampled band");
        NodeInterp& ni = interp_[l];
        ni.base0 = static_cast<long>(std::ceil(nu0 - hw_));
        ni.base1 = static_cast<long>(std::ceil(nu1 - hw_));
        ni.w0.resize(2 * static_cast<size_t>(hw_) + 1);
        ni.w1.resize(2 * static_cast<size_t>(hw_) + 1);
        for (int s = 0; s <= 2 * hw_; ++s) {
            ni.w0[static_cast<size_t>(s)] =
                es_kernel((nu0 - static_cast<double>(ni.base0 + s)) / hw_, beta);
            ni.w1[static_cast<size_t>(s)] =
                es_kernel((nu1 - static_cast<double>(ni.base1 + s)) / hw_, beta);
        }
        double ph = -(yc.x * eta.x + yc.y * eta.y);
        ni.phase = cell * cplx{std::cos(ph), std::sin(ph)};
    }
}

void NonuniformFT::forward(const cplx* field, cplx* values) const {
    size_t n0 = grid_.nx(), n1 = grid_.ny();
    std::vector<cplx> fine(nf0_ * nf1_, cplx{});
    for (size_t i = 0; i < n0; ++i) {
        long s0 = static_cast<long>(i) - static_cast<long>(n0 / 2);
        size_t w0 = static_cast<size_t>((s0 + static_cast<long>(nf0_)) % static_cast<long>(nf0_));
        for (size_t j = 0; j < n1; ++j) {
            long s1 = static_cast<long>(j) - static_cast<long>(n1 / 2);
            size_t w1 =
                static_cast<size_t>((s1 + static_cast<long>(nf1_)) % static_cast<long>(nf1_));
            fine[w0 * nf1_ + w1] = field[i * n1 + j] * (deconv0_[i] * deconv1_[j]);
        }
    }
    fft2(fine.data(), nf0_, nf1_, -1);
    size_t taps = 2 * static_cast<size_t>(hw_) + 1;
    for (size_t l = 0; l < nodes_.size(); ++l) {
        const NodeInterp& ni = interp_[l];
        cplx acc{};
        for (size_t s0 = 0; s0 < taps; ++s0) {
            long m0 = (ni.base0 + static_cast<long>(s0)) % static_cast<long>(nf0_);
            if (m0 < 0) m0 += static_cast<long>(nf0_);
            cplx row{};
            const cplx* line = fine.data() + static_cast<size_t>(m0) * nf1_;
            for (size_t s1 = 0; s1 < taps; ++s1) {
                long m1 = (ni.base1 + static_cast<long>(s1)) % static_cast<long>(nf1_);
                if (m1 < 0) m1 += static_cast<long>(nf1_);
                row += ni.w1[s1] * line[static_cast<size_t>(m1)];
            }
            acc += ni.w0[s0] * row;
        }
        values[l] = acc * ni.phase;
    }
}

void NonuniformFT::adjoint(const cplx* values, cplx* field) const {
    size_t n0 = grid_.nx(), n1 = grid_.ny();
    std::vector<cplx> fine(nf0_ * nf1_, cplx{});
    size_t taps = 2 * static_cast<size_t>(hw_) + 1;
    for (size_t l = 0; l < nodes_.size(); ++l) {
        const NodeInterp& ni = interp_[l];
        cplx w = values[l] * std::conj(ni.phase);
        for (size_t s0 = 0; s0 < taps; ++s0) {
            long m0 = (ni.base0 + static_cast<long>(s0)) % static_cast<long>(nf0_);
            if (m0 < 0) m0 += static_cast<long>(nf0_);
            cplx w0 = ni.w0[s0] * w;
            cplx* line = fine.data() + static_cast<size_t>(m0) * nf1_;
            for (size_t s1 = 0; s1 < taps; ++s1) {
                long m1 = (ni.base1 + static_cast<long>(s1)) % static_cast<long>(nf1_);
                if (m1 < 0) m1 += static_cast<long>(nf1_);
                line[static_cast<size_t>(m1)] += ni.w1[s1] * w0;
            }
        }
    }
    fft2(fine.data(), nf0_, nf1_, +1);
    for (size_t i = 0; i < n0; ++i) {
        long s0 = static_cast<long>(i) - static_cast<long>(n0 / 2);
        size_t w0 = static_cast<size_t>((s0 + static_cast<long>(nf0_)) % static_cast<long>(nf0_));
        for (size_t j = 0; j < n1; ++j) {
            long s1 = static_cast<long>(j) - static_cast<long>(n1 / 2);
            size_t w1 =
                static_cast<size_t>((s1 + static_cast<long>(nf1_)) % static_cast<long>(nf1_));
            field[i * n1 + j] = fine[w0 * nf1_ + w1] * (deconv0_[i] * deconv1_[j]);
        }
    }
}

void NonuniformFT::forward_direct(const cplx* field, cplx* values) const {
    size_t n0 = grid_.nx(), n1 = grid_.ny();
    double cell = grid_.spacing[0] * grid_.spacing[1];
    for (size_t l = 0; l < nodes_.size(); ++l) {
        Vec2 eta = nodes_[l];
        cplx acc{};
        for (size_t i = 0; i < n0; ++i)
            for (size_t j = 0; j < n1; ++j) {
                Vec2 y = grid_.node2(i, j);
                double ph = -(y.x * eta.x + y.y * eta.y);
                acc += field[i * n1 + j] * cplx{std::cos(ph), std::sin(ph)};
            }
        values[l] = acc * cell;
    }
}

}  // namespace tat
