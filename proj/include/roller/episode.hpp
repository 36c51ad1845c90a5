#ifndef ROLLER_EPISODE_HPP
#define ROLLER_EPISODE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roller/controller.hpp"
#include "roller/simworld.hpp"
#include "roller/statevec.hpp"

namespace roller {

enum class StopReason {
    Converged,
    Dropped,
    Budget,
    NotGrasping,
    InitFailure,
};

const char* to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct TrajectoryStep {
    StateVec35 state;
    ActionVec9 action;
    double e_omega = 0.0;  // true orientation error when the action was taken
    std::array<double, 3> residuals{0.0, 0.0, 0.0};
    bool dropped = false;
};

// One episode's state-action record plus how it ended.
struct Trajectory {
    TargetSpec spec;
    std::uint64_t seed = 0;
    std::vector<TrajectoryStep> steps;
    StopReason reason = StopReason::InitFailure;
    double final_e_omega = 100.0;
};

// A policy maps the sensor frame (and the episode's spec) to nine joint
// targets; NotGrasping aborts the episode.
using PolicyFn =
    std::function<Expected<ActionVec9, CtrlError>(const SensorFrame&, const TargetSpec&)>;

// The handcrafted closed-loop policy as a PolicyFn.
PolicyFn make_handcrafted_policy(const GrasperConfig& config, const ControllerParams& params);

// Rolls `policy` on an initialized world until the measured orientation
// error falls below stop_threshold (checked from the second step on), the
// object drops, or max_steps is reached. pos_scale controls the state
// packing.
Trajectory run_episode(WorldState state, const TargetSpec& spec, const PolicyFn& policy,
                       double stop_threshold, int max_steps,
                       double pos_scale = kDefaultPosScale);

// init_grasp at spec.start and run_episode, folding init failures into
// the trajectory's stop reason.
Trajectory run_episode_from_spec(const GrasperConfig& config, const WorldParams& world,
                                 const ObjectModel& object, const TargetSpec& spec,
                                 const PolicyFn& policy, double stop_threshold, int max_steps,
                                 std::uint64_t seed, double pos_scale = kDefaultPosScale);

}  // namespace roller

#endif  // ROLLER_EPISODE_HPP
