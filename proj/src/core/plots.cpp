#include "core/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tat {

namespace fs = std::filesystem;

void write_pgm(const ScalarField& f, const std::string& path) {
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi - lo > 0.0 ? hi - lo : 1.0;
    size_t nx = f.grid.nx(), ny = f.grid.ny();
    std::ofstream out(path, std::ios::binary);
    // rows top-to-bottom = decreasing y so images match the usual orientation
    out << "P5\n" << nx << " " << ny << "\n255\n";
    for (size_t row = 0; row < ny; ++row) {
        size_t iy = ny - 1 - row;
        for (size_t ix = 0; ix < nx; ++ix) {
            double v = (f.at(ix, iy) - lo) / span;
            out.put(static_cast<char>(std::clamp(v, 0.0, 1.0) * 255.0));
        }
    }
    std::ofstream txt(path + ".txt");
    txt << "range " << lo << " " << hi << "\n";
}

void write_decay_svg(const std::vector<double>& k, const std::vector<double>& ratio,
                     double slope, const std::string& path) {
    const double W = 480, H = 360, M = 50;
    double lx0 = std::log10(k.front()), lx1 = std::log10(k.back());
    double ly0 = 1e300, ly1 = -1e300;
    for (double r : ratio)
        if (r > 0.0) {
            ly0 = std::min(ly0, std::log10(r));
            ly1 = std::max(ly1, std::log10(r));
        }
    if (ly0 > ly1) {
        ly0 = -3;
        ly1 = 0;
    }
    ly0 -= 0.2;
    ly1 += 0.2;
    auto px = [&](double lx) { return M + (lx - lx0) / std::max(1e-9, lx1 - lx0) * (W - 2 * M); };
    auto py = [&](double ly) { return H - M - (ly - ly0) / (ly1 - ly0) * (H - 2 * M); };
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    out << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
    for (size_t i = 0; i < k.size(); ++i) {
        if (ratio[i] <= 0.0) continue;
        out << px(std::log10(k[i])) << "," << py(std::log10(ratio[i])) << " ";
    }
    out << "'/>\n";
    for (size_t i = 0; i < k.size(); ++i) {
        if (ratio[i] <= 0.0) continue;
        out << "<circle cx='" << px(std::log10(k[i])) << "' cy='" << py(std::log10(ratio[i]))
            << "' r='3' fill='steelblue'/>\n";
    }
    std::ostringstream lab;
    lab.precision(3);
    lab << "cross-term ratio vs carrier, fitted slope " << slope;
    out << "<text x='" << M << "' y='" << M - 14 << "' font-size='14'>" << lab.str()
        << "</text>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 12 << "' font-size='12'>log k</text>\n";
    out << "</svg>\n";
}

void write_fan_svg(const ConeMask& mask, const std::string& path) {
    const double W = 360, H = 360, R = 150, cx = W / 2, cy = H / 2;
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    size_t nodes = mask.grid.size();
    for (size_t b = 0; b < mask.n_dirs; ++b) {
        double mean = 0.0;
        for (size_t node = 0; node < nodes; ++node) mean += mask.weight(node, b);
        mean /= static_cast<double>(nodes);
        double a0 = kTwoPi * (static_cast<double>(b) - 0.5) / static_cast<double>(mask.n_dirs);
        double a1 = kTwoPi * (static_cast<double>(b) + 0.5) / static_cast<double>(mask.n_dirs);
        double x0 = cx + R * std::cos(a0), y0 = cy - R * std::sin(a0);
        double x1 = cx + R * std::cos(a1), y1 = cy - R * std::sin(a1);
        out << "<path d='M" << cx << "," << cy << " L" << x0 << "," << y0 << " A" << R << ","
            << R << " 0 0 0 " << x1 << "," << y1 << " Z' fill='rgb(30,90,160)' fill-opacity='"
            << mean << "' stroke='none'/>\n";
    }
    out << "<circle cx='" << cx << "' cy='" << cy << "' r='" << R
        << "' fill='none' stroke='black'/>\n";
    out << "<text x='10' y='20' font-size='13'>mean visibility by direction</text>\n";
    out << "</svg>\n";
}

PlotOutcome export_plots(const std::string& dir) {
    PlotOutcome res;
    auto have = [&](const std::string& name) { return fs::exists(fs::path(dir) / name); };
    auto field_plot = [&](const std::string& base, const std::string& out_name) {
        if (!have(base + ".f64")) {
            res.warnings.push_back("missing artifact: " + base + ".f64");
            return;
        }
        ScalarField f = read_field_raw((fs::path(dir) / base).string() + ".f64");
        write_pgm(f, (fs::path(dir) / out_name).string());
        ++res.written;
    };
    field_plot("phantom", "phantom.pgm");
    field_plot("phantom_mollified", "phantom_mollified.pgm");
    field_plot("reconstruction", "reconstruction.pgm");

    if (have("phantom_mollified.f64") && have("reconstruction.f64")) {
        ScalarField a = read_field_raw((fs::path(dir) / "phantom_mollified.f64").string());
        ScalarField b = read_field_raw((fs::path(dir) / "reconstruction.f64").string());
        if (a.grid == b.grid) {
            ScalarField d(a.grid);
            for (size_t i = 0; i < d.values.size(); ++i)
                d.values[i] = std::abs(a.values[i] - b.values[i]);
            write_pgm(d, (fs::path(dir) / "difference.pgm").string());
            ++res.written;
        }
    } else {
        res.warnings.push_back("missing artifacts for the difference map");
    }

    if (have("visibility_mean.csv")) {
        // per-bin mean weights dumped by the run; rebuild a tiny mask shell
        std::ifstream in((fs::path(dir) / "visibility_mean.csv").string());
        std::string line;
        std::getline(in, line);  // header
        std::vector<double> means;
        while (std::getline(in, line)) {
            auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            means.push_back(std::stod(line.substr(comma + 1)));
        }
        if (!means.empty()) {
            ConeMask m(Grid({0, 0}, {1, 1}, {2, 2}), means.size());
            for (size_t b = 0; b < means.size(); ++b)
                for (size_t node = 0; node < 4; ++node) m.set(node, b, means[b]);
            write_fan_svg(m, (fs::path(dir) / "visibility_fan.svg").string());
            ++res.written;
        }
    } else {
        res.warnings.push_back("missing artifact: visibility_mean.csv");
    }

    if (have("cross_term.csv")) {
        std::ifstream in((fs::path(dir) / "cross_term.csv").string());
        std::string line;
        std::getline(in, line);
        std::vector<double> ks, ratios;
        double slope = 0.0;
        while (std::getline(in, line)) {
            std::istringstream is(line);
            std::string a, b;
            if (!std::getline(is, a, ',') || !std::getline(is, b, ',')) continue;
            if (a == "slope") {
                slope = std::stod(b);
            } else {
                ks.push_back(std::stod(a));
                ratios.push_back(std::stod(b));
            }
        }
        if (ks.size() >= 2) {
            write_decay_svg(ks, ratios, slope, (fs::path(dir) / "cross_term_decay.svg").string());
            ++res.written;
        }
    } else {
        res.warnings.push_back("missing artifact: cross_term.csv");
    }
    return res;
}

}  // namespace tat
