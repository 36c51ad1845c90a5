#ifndef ROLLER_CONTROLLER_HPP
#define ROLLER_CONTROLLER_HPP

#include <array>
#include <utility>

#include "roller/config.hpp"
#include "roller/expected.hpp"
#include "roller/kinematics.hpp"
#include "roller/pose.hpp"

namespace roller {

enum class CtrlError {
    NotGrasping,
};

const char* to_string(CtrlError e);

// One object transformation: where the object starts and where it should
// end up. Together with the two poses' 3 + 3 position and 3 + 3
// orientation components this is the 12-dim transformation descriptor.
struct TargetSpec {
    Pose start;
    Pose target;
};

// Handcrafted-policy tuning. The grasper geometry and the per-step
// scaling lambda live in GrasperConfig; these are the loop-level knobs.
struct ControllerParams {
    double w_pos = 1.0;             // weight on the translation part of the error
    double stop_threshold = 5.0;    // e_omega below which an episode counts as converged
    int max_steps = 3000;
    double assumed_radius_mm = 30.0;  // spherical approximation of the object
    double contact_band_mm = 6.0;     // in-contact test on the assumed sphere
    double base_search_min = deg_to_rad(-45.0);
    double base_search_max = deg_to_rad(80.0);
    double roller_rate_cap = 0.2;      // rad/step
    double pivot_fold_slack = deg_to_rad(8.0);
};

// Nine joint position targets plus the per-finger decomposition
// diagnostics behind them.
struct ControlCommand {
    JointVector joint_targets;
    std::array<ContactDecomposition, 3> decompositions{};
    std::array<bool, 3> degenerate_flags{false, false, false};
    std::array<JointRates, 3> rates{};
};

// The controller's sphere-model view of the grasp, rebuilt from measured
// joints and measured object pose each step.
struct ControllerView {
    std::array<FingerFrames, 3> frames{};
    std::array<ContactState, 3> contacts{};
    std::array<bool, 3> in_contact{false, false, false};
};

// Desired per-step object twist: lambda-scaled pose difference, the
// rotation part as angle * axis.
std::pair<Vec3, Vec3> desired_object_velocity(const Pose& current, const Pose& target,
                                              double lambda);

ControllerView controller_view(const GrasperConfig& config, const ControllerParams& params,
                               const JointVector& joints_meas, const Pose& object_pose_meas);

// The base angle at which the assumed sphere's gap is zero, found by
// scan + bisection over the base range. No contact crossing -> no value.
Expected<double, CtrlError> grip_zero_gap_angle(const GrasperConfig& config,
                                                const ControllerParams& params,
                                                int finger, const Vec3& object_center);

// One control step: per finger, realize the desired contact motion by
// decomposing it, steering the pivot toward the aligning angle under the
// pivot rate limit, advancing the roller along the achievable rolling
// component, and holding the base at the grip setpoint (zero-gap angle
// plus preload).
Expected<ControlCommand, CtrlError> step_policy(const GrasperConfig& config,
                                                const ControllerParams& params,
                                                const ControllerView& view,
                                                const Pose& current, const Pose& target,
                                                const JointVector& joints);

}  // namespace roller

#endif  // ROLLER_CONTROLLER_HPP
