#ifndef ROLLER_CONFIG_HPP
#define ROLLER_CONFIG_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "roller/vec3.hpp"

namespace roller {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Nine joint values, ordered finger A (base, pivot, roller), finger B,
// finger C. Base/pivot in rad; roller is an unbounded accumulated angle.
struct JointVector {
    std::array<double, 9> v{};

    double& base(int finger) { return v[3 * finger + 0]; }
    double& pivot(int finger) { return v[3 * finger + 1]; }
    double& roller(int finger) { return v[3 * finger + 2]; }
    double base(int finger) const { return v[3 * finger + 0]; }
    double pivot(int finger) const { return v[3 * finger + 1]; }
    double roller(int finger) const { return v[3 * finger + 2]; }

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    bool operator==(const JointVector& o) const { return v == o.v; }
};

// Geometry and controller constants of the grasper. Lengths in mm,
// angles in rad. Defaults follow the physical prototype: links 48 and
// 122 mm, roller radius 21.5 mm, pivot range +-pi/2 with a 3 deg/step
// rotation threshold.
struct GrasperConfig {
    double link_a = 48.0;
    double link_b = 122.0;
    double roller_radius_r = 21.5;
    double base_circle_radius = 50.0;
    std::array<double, 3> finger_azimuths{0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0};
    double pivot_limit = kPi / 2.0;
    double pivot_rate_limit = deg_to_rad(3.0);
    double lambda = 0.05;          // per-step scaling of the pose difference
    double grip_setpoint = deg_to_rad(0.5);  // base preload past the zero-gap angle
    double leaky_slope = 0.01;

    double finger_length() const { return link_a + link_b; }

    void validate() const {
        if (!(link_a > 0.0)) throw std::invalid_argument("GrasperConfig: link_a must be > 0");
        if (!(link_b > 0.0)) throw std::invalid_argument("GrasperConfig: link_b must be > 0");
        if (!(roller_radius_r > 0.0))
            throw std::invalid_argument("GrasperConfig: roller_radius_r must be > 0");
        if (!(base_circle_radius > 0.0))
            throw std::invalid_argument("GrasperConfig: base_circle_radius must be > 0");
        if (!(pivot_rate_limit > 0.0))
            throw std::invalid_argument("GrasperConfig: pivot_rate_limit must be > 0");
        if (!(pivot_limit > 0.0))
            throw std::invalid_argument("GrasperConfig: pivot_limit must be > 0");
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw std::invalid_argument("GrasperConfig: lambda must be in (0, 1]");
        if (!(leaky_slope >= 0.0))
            throw std::invalid_argument("GrasperConfig: leaky_slope must be >= 0");
    }
};

struct Sphere {
    double radius = 30.0;  // mm
};

struct Box {
    double dx = 60.0;  // full extents, mm
    double dy = 60.0;
    double dz = 60.0;
};

// Grasped object. Mass is carried for provenance; the kinematic world
// does not use it.
struct ObjectModel {
    std::variant<Sphere, Box> shape = Sphere{};
    double mass_g = 32.4;

    bool is_sphere() const { return std::holds_alternative<Sphere>(shape); }
    const Sphere& sphere() const { return std::get<Sphere>(shape); }
    const Box& box() const { return std::get<Box>(shape); }

    // Largest sphere fully inside the shape, used by the spherical
    // contact approximation in the controller.
    double inradius() const {
        if (is_sphere()) return sphere().radius;
        const Box& b = box();
        return 0.5 * std::min(b.dx, std::min(b.dy, b.dz));
    }

    double circumradius() const {
        if (is_sphere()) return sphere().radius;
        const Box& b = box();
        return 0.5 * std::sqrt(b.dx * b.dx + b.dy * b.dy + b.dz * b.dz);
    }

    void validate() const {
        if (is_sphere()) {
            if (!(sphere().radius > 0.0))
                throw std::invalid_argument("ObjectModel: sphere radius must be > 0");
        } else {
            const Box& b = box();
            if (!(b.dx > 0.0 && b.dy > 0.0 && b.dz > 0.0))
                throw std::invalid_argument("ObjectModel: box extents must be > 0");
        }
    }
};

}  // namespace roller

#endif  // ROLLER_CONFIG_HPP
