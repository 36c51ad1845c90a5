#ifndef ROLLER_QUAT_HPP
#define ROLLER_QUAT_HPP

#include <cmath>
#include <stdexcept>

#include "roller/vec3.hpp"

namespace roller {

// Axis-angle rotation. Canonical form keeps angle in [0, pi] and the
// axis unit-norm; see AngleAxis::canonical.
struct AngleAxis {
    Vec3 axis{1.0, 0.0, 0.0};
    double angle = 0.0;

    // Canonicalizes an arbitrary (axis, angle): axis normalized, angle
    // wrapped into [0, pi] with axis flips absorbing the sign. A zero
    // axis with nonzero angle is rejected.
    static AngleAxis canonical(const Vec3& axis, double angle);

    // axis * angle, the 3-real encoding used in packed state vectors.
    Vec3 rotation_vector() const { return angle * axis; }
};

// Unit quaternion, scalar-first [w, x, y, z], Hamilton convention,
// right-handed frames. Every constructor normalizes, so downstream code
// can rely on |q| = 1 within 1e-9.
struct UnitQuat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    UnitQuat() = default;

    UnitQuat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
        normalize();
    }

    static UnitQuat identity() { return {}; }

    void normalize() {
        double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (n < 1e-15) {
            throw std::invalid_argument("UnitQuat: zero-norm quaternion");
        }
        double inv = 1.0 / n;
        w *= inv; x *= inv; y *= inv; z *= inv;
    }

    UnitQuat conjugate() const {
        UnitQuat q;
        q.w = w; q.x = -x; q.y = -y; q.z = -z;
        return q;
    }

    Vec3 vec() const { return {x, y, z}; }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

// Hamilton product, renormalized.
inline UnitQuat quat_mul(const UnitQuat& a, const UnitQuat& b) {
    return UnitQuat(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w);
}

// Rotates v by q: q * v * q^-1, expanded to avoid the full products.
inline Vec3 quat_rotate(const UnitQuat& q, const Vec3& v) {
    Vec3 u = q.vec();
    Vec3 uv = cross(u, v);
    Vec3 uuv = cross(u, uv);
    return v + 2.0 * (q.w * uv + uuv);
}

// [cos(theta/2), sin(theta/2) * axis]. Rejects a zero axis paired with a
// nonzero angle; a zero angle maps to identity for any axis.
inline UnitQuat quat_from_angle_axis(const AngleAxis& aa) {
    double axis_norm = aa.axis.norm();
    if (axis_norm < 1e-12) {
        if (std::abs(aa.angle) < 1e-15) return UnitQuat::identity();
        throw std::invalid_argument("quat_from_angle_axis: zero axis with nonzero angle");
    }
    Vec3 a = aa.axis / axis_norm;
    double half = 0.5 * aa.angle;
    double s = std::sin(half);
    return UnitQuat(std::cos(half), s * a.x, s * a.y, s * a.z);
}

inline UnitQuat quat_from_angle_axis(const Vec3& axis, double angle) {
    return quat_from_angle_axis(AngleAxis{axis, angle});
}

// Canonical angle-axis of q: angle in [0, pi]. The zero rotation reports
// axis [1,0,0]; at exactly pi the axis sign is fixed by making its first
// nonzero component positive (double-cover tie break).
inline AngleAxis quat_to_angle_axis(const UnitQuat& q) {
    UnitQuat p = q;
    if (p.w < 0.0) { p.w = -p.w; p.x = -p.x; p.y = -p.y; p.z = -p.z; }
    double vnorm = p.vec().norm();
    AngleAxis aa;
    if (vnorm < 1e-12) {
        aa.axis = Vec3::unit_x();
        aa.angle = 0.0;
        return aa;
    }
    aa.angle = 2.0 * std::atan2(vnorm, p.w);
    aa.axis = p.vec() / vnorm;
    constexpr double pi = 3.14159265358979323846;
    if (aa.angle > pi) aa.angle = pi;  // atan2 rounding at the boundary
    if (std::abs(aa.angle - pi) < 1e-12) {
        double lead = (std::abs(aa.axis.x) > 1e-12) ? aa.axis.x
                    : (std::abs(aa.axis.y) > 1e-12) ? aa.axis.y
                                                    : aa.axis.z;
        if (lead < 0.0) aa.axis = -aa.axis;
    }
    return aa;
}

inline AngleAxis AngleAxis::canonical(const Vec3& axis, double angle) {
    double n = axis.norm();
    if (n < 1e-12) {
        if (std::abs(angle) < 1e-15) return AngleAxis{Vec3::unit_x(), 0.0};
        throw std::invalid_argument("AngleAxis: zero axis with nonzero angle");
    }
    return quat_to_angle_axis(quat_from_angle_axis(axis / n, angle));
}

}  // namespace roller

#endif  // ROLLER_QUAT_HPP
