#include "core/grid.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tat {

Grid::Grid(std::vector<double> origin_, std::vector<double> spacing_, std::vector<size_t> shape_)
    : origin(std::move(origin_)), spacing(std::move(spacing_)), shape(std::move(shape_)) {
    if (shape.size() != origin.size() || shape.size() != spacing.size())
        throw ValidationError("grid: origin/spacing/shape rank mismatch");
    if (shape.size() != 2 && shape.size() != 3)
        throw ValidationError("grid: dim must be 2 or 3");
    for (size_t a = 0; a < shape.size(); ++a) {
        if (!(spacing[a] > 0.0)) throw ValidationError("grid: spacing must be > 0");
        if (shape[a] < 2) throw ValidationError("grid: shape must be >= 2 on every axis");
    }
}

size_t Grid::size() const {
    size_t n = 1;
    for (size_t s : shape) n *= s;
    return n;
}

double Grid::min_spacing() const {
    return *std::min_element(spacing.begin(), spacing.end());
}

Vec2 Grid::origin2() const {
    if (dim() != 2) throw Error("grid: 2D accessor on non-2D grid");
    return {origin[0], origin[1]};
}

Vec2 Grid::spacing2() const {
    if (dim() != 2) throw Error("grid: 2D accessor on non-2D grid");
    return {spacing[0], spacing[1]};
}

size_t Grid::nx() const { return shape[0]; }
size_t Grid::ny() const { return shape[1]; }

Vec2 Grid::node2(size_t ix, size_t iy) const {
    return {origin[0] + static_cast<double>(ix) * spacing[0],
            origin[1] + static_cast<double>(iy) * spacing[1]};
}

Vec2 Grid::node2_flat(size_t flat) const {
    return node2(flat / shape[1], flat % shape[1]);
}

Vec2 Grid::upper2() const {
    return node2(shape[0] - 1, shape[1] - 1);
}

bool Grid::contains2(Vec2 p, double pad) const {
    Vec2 lo = lower2(), hi = upper2();
    return p.x >= lo.x - pad && p.x <= hi.x + pad && p.y >= lo.y - pad && p.y <= hi.y + pad;
}

ScalarField::ScalarField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw ValidationError("field: values length != product of shape");
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::l2() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    double cell = 1.0;
    for (double h : grid.spacing) cell *= h;
    return std::sqrt(s * cell);
}

void ScalarField::check_finite(const std::string& label) const {
    for (double v : values)
        if (!std::isfinite(v)) throw ValidationError(label + ": non-finite sample");
}

double ScalarField::sample2(Vec2 p) const {
    const Grid& g = grid;
    double fx = (p.x - g.origin[0]) / g.spacing[0];
    double fy = (p.y - g.origin[1]) / g.spacing[1];
    fx = std::clamp(fx, 0.0, static_cast<double>(g.shape[0] - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(g.shape[1] - 1));
    size_t ix = std::min(static_cast<size_t>(fx), g.shape[0] - 2);
    size_t iy = std::min(static_cast<size_t>(fy), g.shape[1] - 2);
    double ax = fx - static_cast<double>(ix);
    double ay = fy - static_cast<double>(iy);
    double v00 = at(ix, iy), v01 = at(ix, iy + 1);
    double v10 = at(ix + 1, iy), v11 = at(ix + 1, iy + 1);
    return (1 - ax) * ((1 - ay) * v00 + ay * v01) + ax * ((1 - ay) * v10 + ay * v11);
}

double rel_l2_diff(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw Error("rel_l2_diff: grid mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double d = a.values[i] - b.values[i];
        num += d * d;
        den += b.values[i] * b.values[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

void write_field_raw(const ScalarField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for write: " + path);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    std::ofstream meta(path + ".meta");
    meta << "dtype float64 little_endian\n";
    meta << "order row-major last-axis-fastest\n";
    meta << "dim " << f.grid.dim() << "\n";
    meta << "shape";
    for (size_t s : f.grid.shape) meta << " " << s;
    meta << "\norigin";
    for (double o : f.grid.origin) meta << " " << o;
    meta << "\nspacing";
    for (double h : f.grid.spacing) meta << " " << h;
    meta << "\n";
}

ScalarField read_field_raw(const std::string& path) {
    std::ifstream meta(path + ".meta");
    if (!meta) throw Error("missing sidecar: " + path + ".meta");
    std::vector<size_t> shape;
    std::vector<double> origin, spacing;
    std::string line;
    while (std::getline(meta, line)) {
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "shape") {
            size_t v;
            while (is >> v) shape.push_back(v);
        } else if (key == "origin") {
            double v;
            while (is >> v) origin.push_back(v);
        } else if (key == "spacing") {
            double v;
            while (is >> v) spacing.push_back(v);
        }
    }
    Grid g(origin, spacing, shape);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    std::vector<double> vals(g.size());
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw Error("short read: " + path);
    return ScalarField(g, std::move(vals));
}

}  // namespace tat
