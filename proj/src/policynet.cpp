#include "roller/policynet.hpp"

#include <cmath>

#include "roller/rng.hpp"

namespace roller {

namespace {

constexpr double kKinkMargin = 1e-4;

Eigen::MatrixXd leaky(const Eigen::MatrixXd& z, double slope) {
    return z.unaryExpr([slope](double x) { return x >= 0.0 ? x : slope * x; });
}

Eigen::MatrixXd leaky_grad(const Eigen::MatrixXd& z, double slope) {
    return z.unaryExpr([slope](double x) { return x >= 0.0 ? 1.0 : slope; });
}

struct ForwardCache {
    std::array<Eigen::MatrixXd, PolicyNet::kLayers> pre;  // preactivations per layer
    std::array<Eigen::MatrixXd, PolicyNet::kLayers> act;  // activations (act[3] = output)
};

ForwardCache forward_cached(const PolicyNet& net, const Eigen::MatrixXd& x) {
    ForwardCache c;
    const Eigen::MatrixXd* in = &x;
    for (int l = 0; l < PolicyNet::kLayers; ++l) {
        c.pre[l] = (net.weights[l] * (*in)).colwise() + net.biases[l];
        if (l + 1 < PolicyNet::kLayers) {
            c.act[l] = leaky(c.pre[l], net.leaky_slope);
        } else {
            c.act[l] = c.pre[l];  // linear output layer
        }
        in = &c.act[l];
    }
    return c;
}

struct Grads {
    std::array<Eigen::MatrixXd, PolicyNet::kLayers> dW;
    std::array<Eigen::VectorXd, PolicyNet::kLayers> db;
};

// Gradient of mean-over-samples |f(x) - y|^2.
Grads backward(const PolicyNet& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
               const ForwardCache& c) {
    Grads g;
    long batch = x.cols();
    Eigen::MatrixXd delta = (2.0 / static_cast<double>(batch)) * (c.act[3] - y);
    for (int l = PolicyNet::kLayers - 1; l >= 0; --l) {
        const Eigen::MatrixXd& input = (l == 0) ? x : c.act[l - 1];
        g.dW[l] = delta * input.transpose();
        g.db[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (net.weights[l].transpose() * delta)
                        .cwiseProduct(leaky_grad(c.pre[l - 1], net.leaky_slope));
        }
    }
    return g;
}

// True when any hidden preactivation lies within margin of zero, where
// the leaky-ReLU derivative is discontinuous.
bool near_kink(const ForwardCache& c, double margin) {
    for (int l = 0; l + 1 < PolicyNet::kLayers; ++l) {
        if ((c.pre[l].array().abs() < margin).any()) return true;
    }
    return false;
}

}  // namespace

PolicyNet make_policy_net(std::uint64_t seed, double leaky_slope, double input_pos_scale,
                          int hidden) {
    PolicyNet net;
    net.leaky_slope = leaky_slope;
    net.input_pos_scale = input_pos_scale;
    net.seed = seed;
    std::array<int, PolicyNet::kLayers + 1> sizes{35, hidden, hidden, hidden, 9};
    Rng rng = Rng::derive(seed, "net-init");
    for (int l = 0; l < PolicyNet::kLayers; ++l) {
        int rows = sizes[l + 1];
        int cols = sizes[l];
        double limit = std::sqrt(6.0 / static_cast<double>(cols));
        net.weights[l].resize(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                net.weights[l](i, j) = rng.uniform(-limit, limit);
            }
        }
        net.biases[l] = Eigen::VectorXd::Zero(rows);
    }
    return net;
}

ActionVec9 forward(const PolicyNet& net, const StateVec35& s) {
    Eigen::VectorXd x(35);
    for (int i = 0; i < 35; ++i) x[i] = s[i];
    ForwardCache c = forward_cached(net, x);
    ActionVec9 a;
    for (int i = 0; i < 9; ++i) a.v[static_cast<std::size_t>(i)] = c.act[3](i, 0);
    return a;
}

Eigen::MatrixXd forward_batch(const PolicyNet& net, const Eigen::MatrixXd& states) {
    return forward_cached(net, states).act[3];
}

double dataset_loss(const PolicyNet& net, const Dataset& data) {
    Eigen::MatrixXd out = forward_batch(net, data.states);
    return (out - data.actions).squaredNorm() / static_cast<double>(data.size());
}

void train_steps(PolicyNet& net, const Dataset& data, const TrainHyper& hyper) {
    long n = data.size();
    if (n == 0) return;
    std::vector<long> order(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    long batch = std::min<long>(hyper.batch, n);
    Eigen::MatrixXd xb(35, batch);
    Eigen::MatrixXd yb(9, batch);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        Rng rng = Rng::derive(hyper.seed, "shuffle",
                              static_cast<std::uint64_t>(net.epochs_trained));
        for (long i = n - 1; i > 0; --i) {
            long j = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }

        double epoch_loss = 0.0;
        long batches = 0;
        for (long at = 0; at + batch <= n; at += batch) {
            for (long k = 0; k < batch; ++k) {
                long idx = order[static_cast<std::size_t>(at + k)];
                xb.col(k) = data.states.col(idx);
                yb.col(k) = data.actions.col(idx);
            }
            ForwardCache c = forward_cached(net, xb);
            epoch_loss += (c.act[3] - yb).squaredNorm() / static_cast<double>(batch);
            ++batches;
            Grads g = backward(net, xb, yb, c);
            for (int l = 0; l < PolicyNet::kLayers; ++l) {
                net.weights[l].noalias() -= hyper.lr * g.dW[l];
                net.biases[l].noalias() -= hyper.lr * g.db[l];
            }
        }
        net.loss_curve.push_back(batches > 0 ? epoch_loss / static_cast<double>(batches) : 0.0);
        net.epochs_trained += 1;
    }
}

double gradient_check(const PolicyNet& net, const StateVec35& s, const ActionVec9& a,
                      int samples, std::uint64_t seed) {
    Eigen::VectorXd x(35);
    for (int i = 0; i < 35; ++i) x[i] = s[i];
    Eigen::VectorXd y(9);
    for (int i = 0; i < 9; ++i) y[i] = a.v[static_cast<std::size_t>(i)];

    ForwardCache c = forward_cached(net, x);
    // Analytic gradient of |f(x) - y|^2  (batch of one).
    Grads g = backward(net, x, y, c);

    const double h = 1e-5;
    Rng rng = Rng::derive(seed, "grad-check");
    double max_rel = 0.0;
    int accepted = 0;
    int guard = 0;
    while (accepted < samples && guard < samples * 100) {
        ++guard;
        int layer = static_cast<int>(rng.next_below(PolicyNet::kLayers));
        bool is_bias = rng.chance(0.2);
        PolicyNet probe = net;
        double analytic = 0.0;
        double* slot = nullptr;
        if (is_bias) {
            int i = static_cast<int>(rng.next_below(
                static_cast<std::uint32_t>(net.biases[layer].size())));
            analytic = g.db[layer](i);
            slot = &probe.biases[layer](i);
        } else {
            int i = static_cast<int>(rng.next_below(
                static_cast<std::uint32_t>(net.weights[layer].rows())));
            int j = static_cast<int>(rng.next_below(
                static_cast<std::uint32_t>(net.weights[layer].cols())));
            analytic = g.dW[layer](i, j);
            slot = &probe.weights[layer](i, j);
        }

        double saved = *slot;
        *slot = saved + h;
        ForwardCache cp = forward_cached(probe, x);
        if (near_kink(cp, kKinkMargin)) continue;
        double lp = (cp.act[3] - y).squaredNorm();
        *slot = saved - h;
        ForwardCache cm = forward_cached(probe, x);
        if (near_kink(cm, kKinkMargin)) continue;
        double lm = (cm.act[3] - y).squaredNorm();
        *slot = saved;

        double fd = (lp - lm) / (2.0 * h);
        double denom = std::max({std::abs(fd), std::abs(analytic), 1e-8});
        max_rel = std::max(max_rel, std::abs(fd - analytic) / denom);
        ++accepted;
    }
    return max_rel;
}

PolicyFn make_learned_policy(const PolicyNet& net) {
    return [net](const SensorFrame& sensors,
                 const TargetSpec& spec) -> Expected<ActionVec9, CtrlError> {
        StateVec35 s = assemble_state(sensors, spec, net.input_pos_scale);
        return forward(net, s);
    };
}

}  // namespace roller
