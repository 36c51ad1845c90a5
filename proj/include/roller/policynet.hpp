#ifndef ROLLER_POLICYNET_HPP
#define ROLLER_POLICYNET_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "roller/episode.hpp"
#include "roller/statevec.hpp"

namespace roller {

// 35 -> 256 -> 256 -> 256 -> 9, leaky ReLU on the hidden layers, linear
// output. Weights row-per-output-unit.
struct PolicyNet {
    static constexpr int kLayers = 4;
    std::array<Eigen::MatrixXd, kLayers> weights;
    std::array<Eigen::VectorXd, kLayers> biases;
    double leaky_slope = 0.01;
    double input_pos_scale = kDefaultPosScale;

    // Training metadata.
    std::uint64_t seed = 0;
    int epochs_trained = 0;
    std::vector<double> loss_curve;  // mean batch loss per epoch

    std::array<int, kLayers + 1> layer_sizes() const {
        return {static_cast<int>(weights[0].cols()),
                static_cast<int>(weights[0].rows()),
                static_cast<int>(weights[1].rows()),
                static_cast<int>(weights[2].rows()),
                static_cast<int>(weights[3].rows())};
    }
};

struct TrainHyper {
    int epochs = 200;
    int batch = 64;
    double lr = 1e-3;
    std::uint64_t seed = 1;
};

// Flat supervised dataset: one column per sample.
struct Dataset {
    Eigen::MatrixXd states;   // 35 x N
    Eigen::MatrixXd actions;  // 9 x N

    long size() const { return states.cols(); }
};

// Fresh net with He-uniform weights and zero biases, deterministic for a
// fixed seed.
PolicyNet make_policy_net(std::uint64_t seed, double leaky_slope = 0.01,
                          double input_pos_scale = kDefaultPosScale,
                          int hidden = 256);

ActionVec9 forward(const PolicyNet& net, const StateVec35& s);

// Batched forward for training/evaluation: columns are samples.
Eigen::MatrixXd forward_batch(const PolicyNet& net, const Eigen::MatrixXd& states);

// Mean over samples of |f(s) - a|^2.
double dataset_loss(const PolicyNet& net, const Dataset& data);

// Plain mini-batch gradient descent on the mean squared L2 loss.
// Deterministic for fixed (net seed, hyper.seed). Appends to the net's
// loss curve, one entry per epoch.
void train_steps(PolicyNet& net, const Dataset& data, const TrainHyper& hyper);

// Max relative error between analytic loss gradients and central finite
// differences (h = 1e-5) on `samples` randomly chosen weight/bias
// coordinates for the single pair (s, a). Coordinates whose perturbation
// sits near an activation kink are re-drawn.
double gradient_check(const PolicyNet& net, const StateVec35& s, const ActionVec9& a,
                      int samples = 100, std::uint64_t seed = 7);

// The learned policy as a PolicyFn (assembles the state with the net's
// recorded input scaling).
PolicyFn make_learned_policy(const PolicyNet& net);

}  // namespace roller

#endif  // ROLLER_POLICYNET_HPP
