#ifndef ROLLER_POSE_HPP
#define ROLLER_POSE_HPP

#include <utility>

#include "roller/quat.hpp"
#include "roller/vec3.hpp"

namespace roller {

// Rigid pose: position in mm, orientation as a unit quaternion.
struct Pose {
    Vec3 position;
    UnitQuat orientation;

    static Pose identity() { return {}; }
};

// Difference from current to target: translation = target - current,
// rotation = canonical angle-axis of target.q * current.q^-1 (the
// world-frame rotation that carries current onto target).
inline std::pair<Vec3, AngleAxis> pose_delta(const Pose& current, const Pose& target) {
    Vec3 translation = target.position - current.position;
    UnitQuat rel = quat_mul(target.orientation, current.orientation.conjugate());
    return {translation, quat_to_angle_axis(rel)};
}

}  // namespace roller

#endif  // ROLLER_POSE_HPP
