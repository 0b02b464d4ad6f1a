#include "naspred/optim.hpp"

#include <cmath>
#include <string>

#include "naspred/errors.hpp"

namespace naspred {

double cosine_lr(const LrSchedule& schedule, int epoch) {
    if (schedule.total_epochs < 1) throw ArgumentError("cosine_lr: total_epochs must be >= 1");
    if (epoch < 0 || epoch > schedule.total_epochs)
        throw RangeError("cosine_lr: epoch " + std::to_string(epoch) + " outside [0, " +
                         std::to_string(schedule.total_epochs) + "]");
    double t = static_cast<double>(epoch) / static_cast<double>(schedule.total_epochs);
    double pi = 3.14159265358979323846;
    return schedule.min_lr +
           (schedule.base_lr - schedule.min_lr) * (1.0 + std::cos(pi * t)) / 2.0;
}

OptimizerState make_optimizer_state(const std::vector<std::size_t>& tensor_sizes,
                                    double weight_decay, double beta1, double beta2, double eps) {
    OptimizerState st;
    st.beta1 = beta1;
    st.beta2 = beta2;
    st.eps = eps;
    st.weight_decay = weight_decay;
    st.slots.resize(tensor_sizes.size());
    for (std::size_t i = 0; i < tensor_sizes.size(); ++i) {
        st.slots[i].first_moment.assign(tensor_sizes[i], 0.0);
        st.slots[i].second_moment.assign(tensor_sizes[i], 0.0);
    }
    return st;
}

void adamw_step(std::span<const ParamRef> params, OptimizerState& state, double lr) {
    if (lr < 0.0) throw ArgumentError("adamw_step: lr must be >= 0");
    if (params.size() != state.slots.size())
        throw ShapeError("adamw_step: parameter count does not match optimizer slots");
    state.step += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t s = 0; s < params.size(); ++s) {
        const ParamRef& p = params[s];
        auto& slot = state.slots[s];
        if (p.values.size() != slot.first_moment.size() || p.values.size() != p.grads.size())
            throw ShapeError("adamw_step: slot " + std::to_string(s) + " size mismatch");
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            double g = p.grads[i];
            if (!std::isfinite(g))
                throw NumericError("adamw_step: non-finite gradient at parameter " +
                                   std::to_string(s) + "[" + std::to_string(i) + "]");
            slot.first_moment[i] = state.beta1 * slot.first_moment[i] + (1.0 - state.beta1) * g;
            slot.second_moment[i] =
                state.beta2 * slot.second_moment[i] + (1.0 - state.beta2) * g * g;
            double m_hat = slot.first_moment[i] / bc1;
            double v_hat = slot.second_moment[i] / bc2;
            double update = m_hat / (std::sqrt(v_hat) + state.eps);
            if (p.decay) update += state.weight_decay * p.values[i];
            p.values[i] -= lr * update;
        }
    }
}

namespace {

std::vector<std::size_t> mlp_tensor_sizes(const MlpParams& params) {
    std::vector<std::size_t> sizes;
    sizes.reserve(params.layers.size() * 2);
    for (const auto& l : params.layers) {
        sizes.push_back(l.weight.data.size());
        sizes.push_back(l.bias.size());
    }
    return sizes;
}

} // namespace

OptimizerState make_optimizer_state(const MlpParams& params, double weight_decay, double beta1,
                                    double beta2, double eps) {
    return make_optimizer_state(mlp_tensor_sizes(params), weight_decay, beta1, beta2, eps);
}

void adamw_step(MlpParams& params, const MlpGrads& grads, OptimizerState& state, double lr,
                bool decay_biases) {
    if (grads.layers.size() != params.layers.size())
        throw ShapeError("adamw_step: gradient layer count mismatch");
    std::vector<ParamRef> refs;
    refs.reserve(params.layers.size() * 2);
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        auto& pl = params.layers[i];
        const auto& gl = grads.layers[i];
        refs.push_back({std::span<double>(pl.weight.data), std::span<const double>(gl.weight.data),
                        true});
        refs.push_back({std::span<double>(pl.bias), std::span<const double>(gl.bias),
                        decay_biases});
    }
    adamw_step(refs, state, lr);
}

} // namespace naspred
