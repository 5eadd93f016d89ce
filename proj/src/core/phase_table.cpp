#include "core/phase_table.hpp"

#include <cmath>
#include <fstream>

namespace tat {

PhaseAmpTable::PhaseAmpTable(int sign, SurfaceDesc surface, std::vector<double> times,
                             size_t n_dirs)
    : sign_(sign), surface_(std::move(surface)), times_(std::move(times)), n_dirs_(n_dirs) {
    size_t n = surface_.size() * times_.size() * n_dirs_;
    phi.assign(n, 0.0);
    amp.assign(n, 0.0);
    grad_w.assign(n, 0.0f);
    grad_n.assign(n, 0.0f);
    dphi_dt.assign(n, 0.0f);
    valid.assign(n, 0);
}

bool PhaseAmpTable::row_valid(size_t j, size_t m) const {
    for (size_t k = 0; k < n_dirs_; ++k)
        if (!valid[idx(j, m, k)]) return false;
    return true;
}

bool PhaseAmpTable::amp_lookup(double w, double t, size_t bin, double& out) const {
    const SurfaceDesc& s = surface_;
    double fj = (w - s.param.front()) / s.spacing;
    double fm = (t - times_.front()) / dt();
    long j0;
    if (s.periodic) {
        double n = static_cast<double>(s.size());
        fj = std::fmod(fj, n);
        if (fj < 0.0) fj += n;
        j0 = static_cast<long>(std::floor(fj));
        if (j0 >= static_cast<long>(s.size())) j0 = 0;
    } else {
        if (fj < 0.0 || fj > static_cast<double>(s.size() - 1)) return false;
        j0 = std::min(static_cast<long>(fj), static_cast<long>(s.size()) - 2);
    }
    double aj = fj - static_cast<double>(j0);
    if (fm < 0.0 || fm > static_cast<double>(times_.size() - 1)) return false;
    long m0 = std::min(static_cast<long>(fm), static_cast<long>(times_.size()) - 2);
    double am = fm - static_cast<double>(m0);
    size_t j1 = s.periodic ? (static_cast<size_t>(j0) + 1) % s.size()
                           : static_cast<size_t>(j0) + 1;
    size_t i00 = idx(static_cast<size_t>(j0), static_cast<size_t>(m0), bin);
    size_t i01 = idx(static_cast<size_t>(j0), static_cast<size_t>(m0) + 1, bin);
    size_t i10 = idx(j1, static_cast<size_t>(m0), bin);
    size_t i11 = idx(j1, static_cast<size_t>(m0) + 1, bin);
    if (!valid[i00] || !valid[i01] || !valid[i10] || !valid[i11]) return false;
    out = (1 - aj) * ((1 - am) * amp[i00] + am * amp[i01]) +
          aj * ((1 - am) * amp[i10] + am * amp[i11]);
    return true;
}

double PhaseAmpTable::coverage() const {
    size_t n = 0;
    for (uint8_t v : valid) n += v;
    return valid.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(valid.size());
}

double PhaseAmpTable::eikonal_residual_max(const SoundSpeed& cs) const {
    double worst = 0.0;
    for (size_t j = 0; j < n_surf(); ++j) {
        double c2 = cs.c2(surface_.position[j]);
        for (size_t m = 0; m < n_times(); ++m)
            for (size_t k = 0; k < n_dirs_; ++k) {
                size_t i = idx(j, m, k);
                if (!valid[i]) continue;
                double dt2 = static_cast<double>(dphi_dt[i]) * dphi_dt[i];
                double g2 = static_cast<double>(grad_w[i]) * grad_w[i] +
                            static_cast<double>(grad_n[i]) * grad_n[i];
                double res = std::abs(dt2 - c2 * g2);
                worst = std::max(worst, res / std::max(1e-300, c2 * g2));
            }
    }
    return worst;
}

double PhaseAmpTable::grad_lower_bound(const SoundSpeed& cs) const {
    double lo = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n_surf(); ++j) {
        double c = cs.c(surface_.position[j]);
        for (size_t m = 0; m < n_times(); ++m)
            for (size_t k = 0; k < n_dirs_; ++k) {
                size_t i = idx(j, m, k);
                if (!valid[i]) continue;
                (void)c;
                double g = std::hypot(static_cast<double>(grad_w[i]),
                                      static_cast<double>(grad_n[i]));
                lo = std::min(lo, g);
            }
    }
    return std::isfinite(lo) ? lo : 0.0;
}

double PhaseAmpTable::initial_phase_error() const {
    // time sample closest to 0
    size_t m0 = 0;
    for (size_t m = 1; m < n_times(); ++m)
        if (std::abs(times_[m]) < std::abs(times_[m0])) m0 = m;
    if (std::abs(times_[m0]) > 1e-12) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (size_t j = 0; j < n_surf(); ++j)
        for (size_t k = 0; k < n_dirs_; ++k) {
            size_t i = idx(j, m0, k);
            if (!valid[i]) continue;
            worst = std::max(worst, std::abs(phi[i] - dot(surface_.position[j], dir(k))));
        }
    return worst;
}

double PhaseAmpTable::initial_amp_error() const {
    size_t m0 = 0;
    for (size_t m = 1; m < n_times(); ++m)
        if (std::abs(times_[m]) < std::abs(times_[m0])) m0 = m;
    double worst = 0.0;
    for (size_t j = 0; j < n_surf(); ++j)
        for (size_t k = 0; k < n_dirs_; ++k) {
            size_t i = idx(j, m0, k);
            if (!valid[i]) continue;
            worst = std::max(worst, std::abs(amp[i] - 1.0));
        }
    return worst;
}

bool PhaseAmpTable::time_derivative_sign_ok() const {
    for (size_t i = 0; i < valid.size(); ++i) {
        if (!valid[i]) continue;
        if (sign_ > 0 && dphi_dt[i] <= 0.0f) return false;
        if (sign_ < 0 && dphi_dt[i] >= 0.0f) return false;
    }
    return true;
}

void PhaseAmpTable::export_raw(const std::string& prefix) const {
    auto dump = [&](const std::string& name, const double* data, size_t n) {
        std::ofstream out(prefix + "_" + name + ".f64", std::ios::binary);
        out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 8));
    };
    dump("phi", phi.data(), phi.size());
    dump("amp", amp.data(), amp.size());
    std::ofstream vm(prefix + "_valid.u8", std::ios::binary);
    vm.write(reinterpret_cast<const char*>(valid.data()),
             static_cast<std::streamsize>(valid.size()));
    std::ofstream meta(prefix + ".meta");
    meta << "axes surface time direction\n";
    meta << "sign " << (sign_ > 0 ? "+" : "-") << "\n";
    meta << "n_surf " << n_surf() << "\nn_times " << n_times() << "\nn_dirs " << n_dirs_ << "\n";
    meta << "t_lo " << times_.front() << "\nt_hi " << times_.back() << "\n";
    meta << "surface_param_start " << surface_.param.front() << "\n";
    meta << "surface_param_step " << surface_.spacing << "\n";
    meta << "directions angle(k)=2*pi*k/n_dirs\n";
}

std::vector<double> two_sided_times(double T, size_t n_half) {
    std::vector<double> ts(2 * n_half + 1);
    double dt = T / static_cast<double>(n_half);
    for (size_t m = 0; m < ts.size(); ++m)
        ts[m] = dt * (static_cast<double>(m) - static_cast<double>(n_half));
    // pin the center sample to exactly zero
    ts[n_half] = 0.0;
    return ts;
}

}  // namespace tat
