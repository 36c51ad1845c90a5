#ifndef ROLLER_DEMOSET_HPP
#define ROLLER_DEMOSET_HPP

#include <cstdint>
#include <vector>

#include "roller/episode.hpp"
#include "roller/policynet.hpp"

namespace roller {

enum class LearnError {
    EmptyDataset,
    NoPath,
};

const char* to_string(LearnError e);

// Pose nearness used for spec indexing and graph node identity.
struct Nearness {
    double eps_pos_mm = 10.0;
    double eps_ang = 10.0;  // e_omega units

    bool poses_match(const Pose& a, const Pose& b) const;
    bool specs_match(const TargetSpec& a, const TargetSpec& b) const;
};

// Demonstration store: trajectories, their TargetSpec index, and the
// traversable graph of known transformations (nodes are poses, each edge
// references the trajectory that demonstrated it).
struct DemoSet {
    struct Edge {
        int from = 0;
        int to = 0;
        int trajectory_index = 0;
    };

    std::vector<Trajectory> trajectories;
    std::vector<TargetSpec> specs;
    std::vector<Pose> nodes;
    std::vector<Edge> edges;

    std::size_t size() const { return trajectories.size(); }
};

// Appends a demonstrated trajectory: stores it, indexes its spec, and
// grows the graph (find-or-create nodes within `near`, one new edge).
void add_demo(DemoSet& demos, const Trajectory& trajectory, const Nearness& near);

// All (state, action) pairs column-stacked for training.
Dataset flatten(const DemoSet& demos);

// Behavior cloning: a fresh net trained on every stored pair with plain
// mini-batch gradient descent. Deterministic for fixed seeds.
Expected<PolicyNet, LearnError> train_bc(const DemoSet& demos, const TrainHyper& hyper,
                                         double leaky_slope = 0.01,
                                         double input_pos_scale = kDefaultPosScale);

// One DAgger round over `specs`: roll the per-step mixture (expert with
// probability beta, learner otherwise), label every visited state with
// the expert action, and return the labeled trajectories.
std::vector<Trajectory> dagger_round(const PolicyNet& net, const GrasperConfig& config,
                                     const ControllerParams& ctrl, const WorldParams& world,
                                     const ObjectModel& object,
                                     const std::vector<TargetSpec>& specs, double beta,
                                     std::uint64_t seed);

// Rolls the learned policy on `candidate`; on success (no drop, final
// e_omega under the stop threshold) and nearness to a known spec, the
// rollout joins the demo set. Returns the (possibly unchanged) set.
DemoSet accumulate(const DemoSet& demos, const TargetSpec& candidate, const PolicyNet& net,
                   const GrasperConfig& config, const ControllerParams& ctrl,
                   const WorldParams& world, const ObjectModel& object, const Nearness& near,
                   std::uint64_t seed);

// Shortest transformation chain (by edge count, ties by insertion order)
// between the graph nodes nearest to `from` and `to`. An empty chain
// when both match the same node.
Expected<std::vector<TargetSpec>, LearnError> plan_path(const DemoSet& demos, const Pose& from,
                                                        const Pose& to, const Nearness& near);

}  // namespace roller

#endif  // ROLLER_DEMOSET_HPP
