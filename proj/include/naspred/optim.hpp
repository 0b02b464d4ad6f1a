#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "naspred/mlp.hpp"

namespace naspred {

struct LrSchedule {
    double base_lr = 0.004;
    double min_lr = 0.0;
    int total_epochs = 250;
};

// min_lr + (base - min) * (1 + cos(pi * epoch / total)) / 2, epoch in [0, total].
double cosine_lr(const LrSchedule& schedule, int epoch);

// Decoupled-weight-decay adaptive-moment optimizer. One Slot per registered
// parameter tensor, in registration order.
struct OptimizerState {
    struct Slot {
        std::vector<double> first_moment;
        std::vector<double> second_moment;
    };

    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    long step = 0;
    std::vector<Slot> slots;
};

OptimizerState make_optimizer_state(const std::vector<std::size_t>& tensor_sizes,
                                    double weight_decay = 0.0, double beta1 = 0.9,
                                    double beta2 = 0.999, double eps = 1e-8);

// A parameter tensor paired with its gradient; decay toggles decoupled weight
// decay for this tensor (biases and embedding rows are registered with false).
struct ParamRef {
    std::span<double> values;
    std::span<const double> grads;
    bool decay = true;
};

// theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + wd * theta), one shared
// step counter for bias correction.
void adamw_step(std::span<const ParamRef> params, OptimizerState& state, double lr);

// Convenience pair for the common case of updating a full MLP.
OptimizerState make_optimizer_state(const MlpParams& params, double weight_decay = 0.0,
                                    double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
void adamw_step(MlpParams& params, const MlpGrads& grads, OptimizerState& state, double lr,
                bool decay_biases = false);

} // namespace naspred
