#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace tat {

namespace {

// second derivative along n at p, on the smoothed field, step = one cell
double d2_normal(const ScalarField& f, Vec2 p, Vec2 n, double step) {
    double a = f.sample2(p + n * step);
    double b = f.sample2(p);
    double c = f.sample2(p - n * step);
    return (a - 2.0 * b + c) / (step * step);
}

}  // namespace

void EdgeReport::finalize() {
    min_visible_score = 1.0;
    max_invisible_score = -1.0;
    max_visible_localization = 0.0;
    n_visible = n_invisible = 0;
    for (const auto& s : segments) {
        if (s.visible) {
            ++n_visible;
            min_visible_score = std::min(min_visible_score, s.score);
            max_visible_localization = std::max(max_visible_localization, s.localization);
        } else {
            ++n_invisible;
            max_invisible_score = std::max(max_invisible_score, s.score);
        }
    }
    if (n_visible == 0) {
        min_visible_score = 0.0;
        max_visible_localization = 0.0;
    }
    if (n_invisible == 0) max_invisible_score = 0.0;
}

void EdgeReport::export_csv(const std::string& path) const {
    std::ofstream out(path);
    out << "x,y,nx,ny,visible,score,localization\n";
    for (const auto& s : segments)
        out << s.position.x << "," << s.position.y << "," << s.normal.x << "," << s.normal.y
            << "," << (s.visible ? 1 : 0) << "," << s.score << "," << s.localization << "\n";
}

EdgeReport edge_recovery_score(const ScalarField& reconstruction, const ScalarField& reference,
                               const std::vector<EdgeSegment>& edges, const ConeMask& visibility,
                               EdgeScoreOptions opts) {
    if (!(reconstruction.grid == reference.grid))
        throw ValidationError("edge score: reconstruction/reference grid mismatch");
    double h = reconstruction.grid.min_spacing();
    ScalarField rec = mollify(reconstruction, opts.smooth_sigma_cells);
    ScalarField ref = mollify(reference, opts.smooth_sigma_cells);

    EdgeReport report;
    report.segments.reserve(edges.size());
    double L = opts.stencil_halflen_cells * h;
    size_t ns = std::max<size_t>(5, opts.stencil_samples);

    for (const auto& e : edges) {
        EdgeSegmentScore s;
        s.position = e.position;
        s.normal = e.normal;
        s.visible = visibility.weight_at(e.position, e.normal) > opts.visibility_cut ||
                    visibility.weight_at(e.position, -e.normal) > opts.visibility_cut;

        std::vector<double> r_rec(ns), r_ref(ns);
        for (size_t i = 0; i < ns; ++i) {
            double t = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(ns - 1);
            Vec2 p = e.position + e.normal * t;
            r_rec[i] = d2_normal(rec, p, e.normal, h);
            r_ref[i] = d2_normal(ref, p, e.normal, h);
        }
        double nr = 0.0, nf = 0.0, ip = 0.0;
        for (size_t i = 0; i < ns; ++i) {
            nr += r_rec[i] * r_rec[i];
            nf += r_ref[i] * r_ref[i];
            ip += r_rec[i] * r_ref[i];
        }
        nr = std::sqrt(nr);
        nf = std::sqrt(nf);
        if (nr == 0.0 || nf == 0.0) {
            s.score = 0.0;
        } else {
            double corr = ip / (nr * nf);
            double amp = std::min(1.0, nr / nf);
            s.score = corr * amp;
        }

        // localization: response-peak offset along the normal
        double best_shift = 0.0, best_val = -1e300;
        double scan = opts.shift_scan_cells * h;
        for (double sh = -scan; sh <= scan + 1e-12; sh += 0.25 * h) {
            double v = std::abs(d2_normal(rec, e.position + e.normal * sh, e.normal, h));
            if (v > best_val) {
                best_val = v;
                best_shift = sh;
            }
        }
        s.localization = std::abs(best_shift);
        report.segments.push_back(s);
    }
    report.finalize();
    return report;
}

}  // namespace tat
