#ifndef ROLLER_VEC3_HPP
#define ROLLER_VEC3_HPP

#include <cmath>

namespace roller {

// Cartesian 3-vector. Positions in mm, velocities in mm/step,
// angular rates in rad/step depending on context.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
    static Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
    static Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
}

inline Vec3 operator*(const Vec3& v, double s) { return s * v; }

inline Vec3 operator/(const Vec3& v, double s) {
    double inv = 1.0 / s;
    return {v.x * inv, v.y * inv, v.z * inv};
}

inline Vec3& operator+=(Vec3& a, const Vec3& b) {
    a.x += b.x; a.y += b.y; a.z += b.z;
    return a;
}

inline Vec3& operator-=(Vec3& a, const Vec3& b) {
    a.x -= b.x; a.y -= b.y; a.z -= b.z;
    return a;
}

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

// Zero vector normalizes to zero; callers that need a direction must
// check the norm first.
inline Vec3 normalized(const Vec3& v) {
    double n = v.norm();
    if (n < 1e-15) return Vec3::zero();
    return v / n;
}

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Angle between the lines spanned by a and b (sign of either vector is
// ignored). Returns radians in [0, pi/2].
inline double line_angle(const Vec3& a, const Vec3& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na < 1e-15 || nb < 1e-15) return 0.0;
    double c = std::abs(dot(a, b)) / (na * nb);
    if (c > 1.0) c = 1.0;
    return std::acos(c);
}

}  // namespace roller

#endif  // ROLLER_VEC3_HPP
