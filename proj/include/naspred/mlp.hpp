#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "naspred/rng.hpp"
#include "naspred/tensor.hpp"

namespace naspred {

// One affine layer of the regressor.
struct MlpLayer {
    DenseMatrix weight; // out x in
    std::vector<double> bias;
};

// Rectifier on hidden layers, identity on the (scalar) output layer.
struct MlpParams {
    std::vector<MlpLayer> layers;

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weight.cols; }
    std::size_t depth() const { return layers.size(); }
    std::size_t parameter_count() const;
};

// Gradient buffers shaped exactly like MlpParams, plus the gradient w.r.t. the
// input vector (needed to fine-tune embedding rows through the input path).
struct MlpGrads {
    std::vector<MlpLayer> layers;
    std::vector<double> input;
};

// dims = {in, hidden..., 1}. Weights uniform in +-sqrt(6/(fan_in+fan_out)),
// biases zero.
MlpParams init_mlp(const std::vector<std::size_t>& dims, Rng& rng);

MlpGrads zero_grads_like(const MlpParams& params);

double mlp_forward(const MlpParams& params, std::span<const double> x);

// Gradient of the single-sample squared error (f(x) - target)^2 w.r.t. every
// parameter and w.r.t. x. Returns the prediction through `pred_out` when given.
MlpGrads mlp_backward(const MlpParams& params, std::span<const double> x, double target,
                      double* pred_out = nullptr);

// Same, accumulating into existing buffers (used by the batch loop).
double mlp_backward_accumulate(const MlpParams& params, std::span<const double> x, double target,
                               MlpGrads& grads);

void scale_grads(MlpGrads& grads, double factor);

double mse_loss(std::span<const double> preds, std::span<const double> targets);

} // namespace naspred
