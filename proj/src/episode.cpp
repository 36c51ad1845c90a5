#include "roller/episode.hpp"

#include <stdexcept>

#include "roller/metric.hpp"

namespace roller {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::Converged: return "converged";
        case StopReason::Dropped: return "dropped";
        case StopReason::Budget: return "budget";
        case StopReason::NotGrasping: return "not-grasping";
        case StopReason::InitFailure: return "init-failure";
    }
    return "?";
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "converged") return StopReason::Converged;
    if (s == "dropped") return StopReason::Dropped;
    if (s == "budget") return StopReason::Budget;
    if (s == "not-grasping") return StopReason::NotGrasping;
    if (s == "init-failure") return StopReason::InitFailure;
    throw std::invalid_argument("unknown stop reason: " + s);
}

PolicyFn make_handcrafted_policy(const GrasperConfig& config, const ControllerParams& params) {
    return [config, params](const SensorFrame& sensors,
                            const TargetSpec& spec) -> Expected<ActionVec9, CtrlError> {
        ControllerView view =
            controller_view(config, params, sensors.joints_meas, sensors.object_pose_meas);
        auto cmd = step_policy(config, params, view, sensors.object_pose_meas, spec.target,
                               sensors.joints_meas);
        if (!cmd) return cmd.error();
        return ActionVec9::from_joints(cmd->joint_targets);
    };
}

Trajectory run_episode(WorldState state, const TargetSpec& spec, const PolicyFn& policy,
                       double stop_threshold, int max_steps, double pos_scale) {
    Trajectory traj;
    traj.spec = spec;
    traj.seed = state.rng_seed;
    traj.reason = StopReason::Budget;

    for (int k = 0; k < max_steps; ++k) {
        if (state.dropped) {
            traj.reason = StopReason::Dropped;
            break;
        }
        SensorFrame sensors = read_sensors(state);
        if (k > 0 && orientation_error(spec.target.orientation,
                                       sensors.object_pose_meas.orientation) < stop_threshold) {
            traj.reason = StopReason::Converged;
            break;
        }

        auto action = policy(sensors, spec);
        if (!action) {
            traj.reason = StopReason::NotGrasping;
            break;
        }

        TrajectoryStep rec;
        rec.state = assemble_state(sensors, spec, pos_scale);
        rec.action = *action;
        rec.e_omega = orientation_error(spec.target.orientation, state.object.orientation);

        JointCommand cmd;
        cmd.targets = action->to_joints();
        auto next = step(state, cmd);
        if (!next) {
            traj.reason = StopReason::Dropped;
            traj.steps.push_back(rec);
            break;
        }
        state = *next;
        rec.residuals = state.last_twist.slip_residual;
        rec.dropped = state.dropped;
        traj.steps.push_back(rec);
    }

    traj.final_e_omega = orientation_error(spec.target.orientation, state.object.orientation);
    if (state.dropped) traj.reason = StopReason::Dropped;
    return traj;
}

Trajectory run_episode_from_spec(const GrasperConfig& config, const WorldParams& world,
                                 const ObjectModel& object, const TargetSpec& spec,
                                 const PolicyFn& policy, double stop_threshold, int max_steps,
                                 std::uint64_t seed, double pos_scale) {
    auto state = init_grasp(config, world, object, spec.start, seed);
    if (!state) {
        Trajectory traj;
        traj.spec = spec;
        traj.seed = seed;
        traj.reason = StopReason::InitFailure;
        return traj;
    }
    return run_episode(*state, spec, policy, stop_threshold, max_steps, pos_scale);
}

}  // namespace roller
