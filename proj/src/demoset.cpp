#include "roller/demoset.hpp"

#include <algorithm>
#include <deque>

#include "roller/metric.hpp"
#include "roller/rng.hpp"

namespace roller {

namespace {

int find_or_add_node(DemoSet& demos, const Pose& pose, const Nearness& near) {
    for (std::size_t i = 0; i < demos.nodes.size(); ++i) {
        if (near.poses_match(demos.nodes[i], pose)) return static_cast<int>(i);
    }
    demos.nodes.push_back(pose);
    return static_cast<int>(demos.nodes.size() - 1);
}

int find_node(const DemoSet& demos, const Pose& pose, const Nearness& near) {
    for (std::size_t i = 0; i < demos.nodes.size(); ++i) {
        if (near.poses_match(demos.nodes[i], pose)) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

const char* to_string(LearnError e) {
    switch (e) {
        case LearnError::EmptyDataset: return "EmptyDataset";
        case LearnError::NoPath: return "NoPath";
    }
    return "?";
}

bool Nearness::poses_match(const Pose& a, const Pose& b) const {
    return distance(a.position, b.position) <= eps_pos_mm &&
           orientation_error(a.orientation, b.orientation) <= eps_ang;
}

bool Nearness::specs_match(const TargetSpec& a, const TargetSpec& b) const {
    return poses_match(a.start, b.start) && poses_match(a.target, b.target);
}

void add_demo(DemoSet& demos, const Trajectory& trajectory, const Nearness& near) {
    demos.trajectories.push_back(trajectory);
    demos.specs.push_back(trajectory.spec);
    int from = find_or_add_node(demos, trajectory.spec.start, near);
    int to = find_or_add_node(demos, trajectory.spec.target, near);
    demos.edges.push_back({from, to, static_cast<int>(demos.trajectories.size() - 1)});
}

Dataset flatten(const DemoSet& demos) {
    long total = 0;
    for (const Trajectory& t : demos.trajectories) {
        total += static_cast<long>(t.steps.size());
    }
    Dataset d;
    d.states.resize(35, total);
    d.actions.resize(9, total);
    long col = 0;
    for (const Trajectory& t : demos.trajectories) {
        for (const TrajectoryStep& s : t.steps) {
            for (int i = 0; i < 35; ++i) d.states(i, col) = s.state[i];
            for (int i = 0; i < 9; ++i) d.actions(i, col) = s.action.v[static_cast<std::size_t>(i)];
            ++col;
        }
    }
    return d;
}

Expected<PolicyNet, LearnError> train_bc(const DemoSet& demos, const TrainHyper& hyper,
                                         double leaky_slope, double input_pos_scale) {
    Dataset data = flatten(demos);
    if (data.size() == 0) return LearnError::EmptyDataset;
    PolicyNet net = make_policy_net(hyper.seed, leaky_slope, input_pos_scale);
    train_steps(net, data, hyper);
    return net;
}

std::vector<Trajectory> dagger_round(const PolicyNet& net, const GrasperConfig& config,
                                     const ControllerParams& ctrl, const WorldParams& world,
                                     const ObjectModel& object,
                                     const std::vector<TargetSpec>& specs, double beta,
                                     std::uint64_t seed) {
    PolicyFn expert = make_handcrafted_policy(config, ctrl);
    PolicyFn learner = make_learned_policy(net);

    std::vector<Trajectory> out;
    out.reserve(specs.size());
    for (std::size_t ep = 0; ep < specs.size(); ++ep) {
        const TargetSpec& spec = specs[ep];
        std::uint64_t episode_seed =
            Rng::derive(seed, "dagger-episode", ep).next_u64();
        Rng mix = Rng::derive(seed, "dagger-mixture", ep);

        Trajectory traj;
        traj.spec = spec;
        traj.seed = episode_seed;
        traj.reason = StopReason::Budget;

        auto init = init_grasp(config, world, object, spec.start, episode_seed);
        if (!init) {
            traj.reason = StopReason::InitFailure;
            out.push_back(traj);
            continue;
        }
        WorldState state = *init;

        for (int k = 0; k < ctrl.max_steps; ++k) {
            if (state.dropped) {
                traj.reason = StopReason::Dropped;
                break;
            }
            SensorFrame sensors = read_sensors(state);
            if (k > 0 && orientation_error(spec.target.orientation,
                                           sensors.object_pose_meas.orientation) <
                             ctrl.stop_threshold) {
                traj.reason = StopReason::Converged;
                break;
            }

            auto expert_action = expert(sensors, spec);
            if (!expert_action) {
                traj.reason = StopReason::NotGrasping;
                break;
            }
            bool use_expert = mix.chance(beta);
            ActionVec9 executed = *expert_action;
            if (!use_expert) {
                auto learner_action = learner(sensors, spec);
                executed = *learner_action;
            }

            TrajectoryStep rec;
            rec.state = assemble_state(sensors, spec, net.input_pos_scale);
            rec.action = *expert_action;  // DAgger label
            rec.e_omega =
                orientation_error(spec.target.orientation, state.object.orientation);

            JointCommand cmd;
            cmd.targets = executed.to_joints();
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
        traj.final_e_omega =
            orientation_error(spec.target.orientation, state.object.orientation);
        if (state.dropped) traj.reason = StopReason::Dropped;
        out.push_back(traj);
    }
    return out;
}

DemoSet accumulate(const DemoSet& demos, const TargetSpec& candidate, const PolicyNet& net,
                   const GrasperConfig& config, const ControllerParams& ctrl,
                   const WorldParams& world, const ObjectModel& object, const Nearness& near,
                   std::uint64_t seed) {
    bool nearby = false;
    for (const TargetSpec& known : demos.specs) {
        if (near.specs_match(candidate, known)) {
            nearby = true;
            break;
        }
    }
    if (!nearby) return demos;

    Trajectory rollout =
        run_episode_from_spec(config, world, object, candidate, make_learned_policy(net),
                              ctrl.stop_threshold, ctrl.max_steps, seed, net.input_pos_scale);
    bool success = rollout.reason == StopReason::Converged &&
                   rollout.final_e_omega < ctrl.stop_threshold;
    if (!success) return demos;

    DemoSet grown = demos;
    add_demo(grown, rollout, near);
    return grown;
}

Expected<std::vector<TargetSpec>, LearnError> plan_path(const DemoSet& demos, const Pose& from,
                                                        const Pose& to, const Nearness& near) {
    int src = find_node(demos, from, near);
    int dst = find_node(demos, to, near);
    if (src < 0 || dst < 0) return LearnError::NoPath;
    if (src == dst) return std::vector<TargetSpec>{};

    // BFS over edges in insertion order; first-found parents give the
    // tie-break by insertion order.
    std::vector<int> parent_edge(demos.nodes.size(), -1);
    std::vector<bool> visited(demos.nodes.size(), false);
    std::deque<int> frontier;
    frontier.push_back(src);
    visited[static_cast<std::size_t>(src)] = true;
    while (!frontier.empty()) {
        int node = frontier.front();
        frontier.pop_front();
        if (node == dst) break;
        for (std::size_t e = 0; e < demos.edges.size(); ++e) {
            const DemoSet::Edge& edge = demos.edges[e];
            if (edge.from != node || visited[static_cast<std::size_t>(edge.to)]) continue;
            visited[static_cast<std::size_t>(edge.to)] = true;
            parent_edge[static_cast<std::size_t>(edge.to)] = static_cast<int>(e);
            frontier.push_back(edge.to);
        }
    }
    if (!visited[static_cast<std::size_t>(dst)]) return LearnError::NoPath;

    std::vector<TargetSpec> path;
    int node = dst;
    while (node != src) {
        int e = parent_edge[static_cast<std::size_t>(node)];
        const DemoSet::Edge& edge = demos.edges[static_cast<std::size_t>(e)];
        path.push_back(demos.specs[static_cast<std::size_t>(edge.trajectory_index)]);
        node = edge.from;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace roller
