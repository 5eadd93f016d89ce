#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tat {

using std::size_t;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// 2D vector / 2x2 matrix helpers. The heavy machinery is two-dimensional;
// grids and raw field I/O stay dimension-agnostic.
struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 b) const { return {x + b.x, y + b.y}; }
    Vec2 operator-(Vec2 b) const { return {x - b.x, y - b.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 b) { x += b.x; y += b.y; return *this; }
    Vec2& operator-=(Vec2 b) { x -= b.x; y -= b.y; return *this; }
    Vec2 operator-() const { return {-x, -y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }

struct Mat2 {
    // row-major: [a b; c d]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 outer(Vec2 u, Vec2 v) { return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y}; }

    Mat2 operator+(const Mat2& m) const { return {a + m.a, b + m.b, c + m.c, d + m.d}; }
    Mat2 operator-(const Mat2& m) const { return {a - m.a, b - m.b, c - m.c, d - m.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2& operator+=(const Mat2& m) { a += m.a; b += m.b; c += m.c; d += m.d; return *this; }
    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 inverse() const {
        double dt = det();
        return Mat2{d, -b, -c, a} * (1.0 / dt);
    }
    Mat2 transpose() const { return {a, c, b, d}; }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Quintic smoothstep ramp: 0 at u<=0, 1 at u>=1, C^2 across both ends,
// and ramp(u) + ramp(1-u) == 1 so complementary tapers partition exactly.
inline double smooth_ramp(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Runs fn(i) for i in [0, n) on up to n_threads workers. Results must be
// written to disjoint slots; chunk order is deterministic.
void parallel_for(size_t n, const std::function<void(size_t)>& fn, int n_threads = 0);

// Process-wide default used when a call site passes n_threads == 0.
void set_default_threads(int n);
int default_threads();

std::string format_vec(Vec2 v);

}  // namespace tat
