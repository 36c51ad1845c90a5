#ifndef ROLLER_SIMWORLD_HPP
#define ROLLER_SIMWORLD_HPP

#include <array>
#include <cstdint>

#include "roller/config.hpp"
#include "roller/expected.hpp"
#include "roller/kinematics.hpp"
#include "roller/pose.hpp"

namespace roller {

enum class SimError {
    Unreachable,
    AlreadyDropped,
};

const char* to_string(SimError e);

// Noise magnitudes, per-step joint rate limits, and the contact/drop
// bands of the kinematic world.
struct WorldParams {
    double sigma_pos_mm = 1.0;
    double sigma_ang_rad = deg_to_rad(1.0);
    double base_rate_limit = deg_to_rad(2.0);   // rad/step
    double pivot_rate_limit = deg_to_rad(3.0);  // rad/step
    double roller_rate_limit = 0.2;             // rad/step
    double base_min = deg_to_rad(-45.0);
    double base_max = deg_to_rad(80.0);
    double contact_gap_tolerance_mm = 1.0;
    double drop_gap_mm = 5.0;
    double drop_fall_mm = 30.0;
};

// Nine joint position targets for one step. The world applies its own
// per-joint rate limits when moving toward them.
struct JointCommand {
    JointVector targets;
};

// Aggregate rolling-without-slipping solve: the object twist closest (in
// least squares) to matching every roller's surface velocity at its
// contact, with the per-contact mismatch reported as slip.
struct TwistSolve {
    Vec3 v;      // mm/step
    Vec3 omega;  // rad/step
    std::array<double, 3> slip_residual{0.0, 0.0, 0.0};  // mm/step
};

// Full world state. Value-copyable; an episode runner owns one
// exclusively. Copies carried per-state: the config and params ride
// along so state-only operations (drop check, sensors) stay
// self-contained.
struct WorldState {
    GrasperConfig config;
    WorldParams params;
    ObjectModel object_model;
    JointVector joints;
    Pose object;
    Pose prev_object;
    std::array<ContactState, 3> contacts{};
    std::array<double, 3> gaps{0.0, 0.0, 0.0};
    int step_index = 0;
    std::uint64_t rng_seed = 0;
    bool dropped = false;
    double grasp_height_mm = 0.0;
    TwistSolve last_twist;
};

// Joint readings plus the (noisy) current and previous object poses. The
// previous measurement reproduces the draw the sensor made one step ago.
struct SensorFrame {
    JointVector joints_meas;
    Pose object_pose_meas;
    Pose previous_object_pose_meas;
};

// Closest point on the object surface to an exterior probe point, the
// inward normal (probe toward the object), and the signed distance of
// the probe to the surface (negative inside).
struct SurfaceProbe {
    Vec3 closest_point;
    Vec3 inward_normal;
    double signed_distance = 0.0;
};

SurfaceProbe probe_object_surface(const ObjectModel& obj, const Pose& object_pose,
                                  const Vec3& probe);

// Roller-object gap for one finger: distance from the roller surface to
// the object surface along the closest-point direction.
double roller_gap(const GrasperConfig& config, const ObjectModel& obj,
                  const Pose& object_pose, const FingerFrames& frames);

// Closes the base joints on the object (pivots and rollers at zero)
// until every roller touches, by per-finger sweep and bisection.
// Deterministic for a fixed seed; the seed only feeds later sensor
// noise.
Expected<WorldState, SimError> init_grasp(const GrasperConfig& config,
                                          const WorldParams& params,
                                          const ObjectModel& object_model,
                                          const Pose& start,
                                          std::uint64_t seed);

// Advances one step: joints move toward targets under rate limits, the
// rigid-body twist is solved from the roller surface velocities at the
// active contacts, the object pose is integrated, and contacts and the
// drop flag are refreshed.
Expected<WorldState, SimError> step(const WorldState& state, const JointCommand& command);

// True joints, noisy object pose (Gaussian position noise per axis,
// small-angle orientation noise about a random axis), and the previous
// pose with the previous step's draw. Pure: depends only on (state.seed,
// state.step_index).
SensorFrame read_sensors(const WorldState& state);

// Drop rule: any contact gap above drop_gap_mm, or the object center
// more than drop_fall_mm below its grasp height.
bool check_drop(const WorldState& state);

// Least-squares object twist from contact points and surface velocities
// (minimum-norm on rank-deficient systems). Exposed for tests; step()
// uses it internally.
TwistSolve solve_object_twist(const std::array<Vec3, 3>& contact_points,
                              const std::array<Vec3, 3>& surface_velocities,
                              const std::array<bool, 3>& active,
                              const Vec3& x_obj);

}  // namespace roller

#endif  // ROLLER_SIMWORLD_HPP
