#include "core/fft_utils.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace tat {

namespace {

std::mutex g_plan_mutex;

fftw_plan plan_2d(size_t n0, size_t n1, int sign) {
    static std::map<std::tuple<size_t, size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> tmp(n0 * n1);
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1),
                                   reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[key] = p;
    return p;
}

fftw_plan plan_1d(size_t n, int sign) {
    static std::map<std::pair<size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> tmp(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[key] = p;
    return p;
}

}  // namespace

void fft2(cplx* data, size_t n0, size_t n1, int sign) {
    fftw_plan p = plan_2d(n0, n1, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void fft1(cplx* data, size_t n, int sign) {
    fftw_plan p = plan_1d(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void trig_interp(const double* in, size_t n, double* out, size_t m) {
    if (m == n) {
        std::copy(in, in + n, out);
        return;
    }
    if (m % n != 0 && m < n) throw Error("trig_interp: m must be >= n");
    thread_local std::vector<cplx> a, b;
    a.assign(n, cplx{});
    for (size_t i = 0; i < n; ++i) a[i] = in[i];
    fft1(a.data(), n, FFTW_FORWARD);
    b.assign(m, cplx{});
    size_t half = n / 2;
    for (size_t k = 0; k < half; ++k) b[k] = a[k];
    for (size_t k = half + 1; k < n; ++k) b[m - (n - k)] = a[k];
    // split the Nyquist coefficient to keep the interpolant real
    b[half] = 0.5 * a[half];
    b[m - half] += 0.5 * a[half];
    fft1(b.data(), m, FFTW_BACKWARD);
    double scale = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < m; ++i) out[i] = b[i].real() * scale;
}

}  // namespace tat
