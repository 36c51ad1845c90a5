#include "roller/statevec.hpp"

namespace roller {

namespace {

void put_vec(StateVec35& s, int at, const Vec3& v) {
    s[at] = v.x;
    s[at + 1] = v.y;
    s[at + 2] = v.z;
}

void put_quat(StateVec35& s, int at, const UnitQuat& q) {
    s[at] = q.w;
    s[at + 1] = q.x;
    s[at + 2] = q.y;
    s[at + 3] = q.z;
}

Vec3 get_vec(const StateVec35& s, int at) { return {s[at], s[at + 1], s[at + 2]}; }

UnitQuat get_quat(const StateVec35& s, int at) {
    return UnitQuat(s[at], s[at + 1], s[at + 2], s[at + 3]);
}

}  // namespace

StateVec35 assemble_state(const SensorFrame& sensors, const TargetSpec& spec,
                          double pos_scale) {
    StateVec35 s;
    for (int i = 0; i < 9; ++i) s[i] = sensors.joints_meas[i];
    put_vec(s, 9, pos_scale * sensors.object_pose_meas.position);
    put_quat(s, 12, sensors.object_pose_meas.orientation);
    put_vec(s, 16, pos_scale * sensors.previous_object_pose_meas.position);
    put_quat(s, 19, sensors.previous_object_pose_meas.orientation);
    put_vec(s, 23, pos_scale * spec.target.position);
    put_vec(s, 26, quat_to_angle_axis(spec.target.orientation).rotation_vector());
    put_vec(s, 29, pos_scale * spec.start.position);
    put_vec(s, 32, quat_to_angle_axis(spec.start.orientation).rotation_vector());
    return s;
}

UnpackedState unpack_state(const StateVec35& s, double pos_scale) {
    UnpackedState u;
    for (int i = 0; i < 9; ++i) u.joints[i] = s[i];
    double inv = 1.0 / pos_scale;
    u.current_position = inv * get_vec(s, 9);
    u.current_orientation = get_quat(s, 12);
    u.previous_position = inv * get_vec(s, 16);
    u.previous_orientation = get_quat(s, 19);
    u.termination_position = inv * get_vec(s, 23);
    u.termination_rotation_vector = get_vec(s, 26);
    u.initial_position = inv * get_vec(s, 29);
    u.initial_rotation_vector = get_vec(s, 32);
    return u;
}

}  // namespace roller
