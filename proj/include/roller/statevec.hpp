#ifndef ROLLER_STATEVEC_HPP
#define ROLLER_STATEVEC_HPP

#include <array>

#include "roller/controller.hpp"
#include "roller/simworld.hpp"

namespace roller {

// 35-dim policy state, packed as: joints (0-8), current object position
// (9-11), current object quaternion wxyz (12-15), previous object
// position (16-18), previous object quaternion (19-22), termination
// position (23-25), termination orientation as angle*axis (26-28),
// initial position (29-31), initial orientation as angle*axis (32-34).
// Positions are pre-scaled by pos_scale so every entry is O(1).
struct StateVec35 {
    std::array<double, 35> v{};

    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
};

// Nine joint position targets, same ordering as JointVector.
struct ActionVec9 {
    std::array<double, 9> v{};

    static ActionVec9 from_joints(const JointVector& j) {
        ActionVec9 a;
        a.v = j.v;
        return a;
    }

    JointVector to_joints() const {
        JointVector j;
        j.v = v;
        return j;
    }
};

// Default position scaling (mm -> dm) recorded in PolicyNet metadata.
constexpr double kDefaultPosScale = 0.01;

StateVec35 assemble_state(const SensorFrame& sensors, const TargetSpec& spec,
                          double pos_scale = kDefaultPosScale);

// Inverse of assemble_state's packing (positions unscaled back to mm).
// The angle-axis slices come back as rotation vectors.
struct UnpackedState {
    JointVector joints;
    Vec3 current_position;
    UnitQuat current_orientation;
    Vec3 previous_position;
    UnitQuat previous_orientation;
    Vec3 termination_position;
    Vec3 termination_rotation_vector;
    Vec3 initial_position;
    Vec3 initial_rotation_vector;
};

UnpackedState unpack_state(const StateVec35& s, double pos_scale = kDefaultPosScale);

}  // namespace roller

#endif  // ROLLER_STATEVEC_HPP
