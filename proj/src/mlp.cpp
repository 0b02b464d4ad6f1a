#include "naspred/mlp.hpp"

#include <cmath>
#include <string>

#include "naspred/errors.hpp"

namespace naspred {

std::size_t MlpParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.data.size() + l.bias.size();
    return n;
}

MlpParams init_mlp(const std::vector<std::size_t>& dims, Rng& rng) {
    if (dims.size() < 2) throw ArgumentError("init_mlp: need at least input and output dims");
    MlpParams p;
    p.layers.reserve(dims.size() - 1);
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        MlpLayer layer;
        layer.weight = DenseMatrix(dims[i + 1], dims[i]);
        layer.bias.assign(dims[i + 1], 0.0);
        double bound = std::sqrt(6.0 / static_cast<double>(dims[i] + dims[i + 1]));
        for (double& w : layer.weight.data) w = rng.uniform(-bound, bound);
        p.layers.push_back(std::move(layer));
    }
    return p;
}

MlpGrads zero_grads_like(const MlpParams& params) {
    MlpGrads g;
    g.layers.reserve(params.layers.size());
    for (const auto& l : params.layers) {
        MlpLayer z;
        z.weight = DenseMatrix(l.weight.rows, l.weight.cols);
        z.bias.assign(l.bias.size(), 0.0);
        g.layers.push_back(std::move(z));
    }
    g.input.assign(params.input_dim(), 0.0);
    return g;
}

namespace {

void check_shapes(const MlpParams& params, std::span<const double> x) {
    if (params.layers.empty()) throw ShapeError("mlp: no layers");
    if (x.size() != params.input_dim())
        throw ShapeError("mlp: input length " + std::to_string(x.size()) +
                         " does not match first layer in-dim " +
                         std::to_string(params.input_dim()));
    for (std::size_t i = 0; i + 1 < params.layers.size(); ++i)
        if (params.layers[i].weight.rows != params.layers[i + 1].weight.cols)
            throw ShapeError("mlp: layer " + std::to_string(i) + " out-dim does not chain");
    if (params.layers.back().weight.rows != 1)
        throw ShapeError("mlp: output dim must be 1");
}

// Runs the forward pass, keeping pre-activations when asked.
double forward_impl(const MlpParams& params, std::span<const double> x,
                    std::vector<std::vector<double>>* activations) {
    check_shapes(params, x);
    std::vector<double> a(x.begin(), x.end());
    if (activations) activations->push_back(a);
    const std::size_t last = params.layers.size() - 1;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        const auto& l = params.layers[i];
        std::vector<double> z = matvec(l.weight, a);
        for (std::size_t r = 0; r < z.size(); ++r) z[r] += l.bias[r];
        if (i < last)
            for (double& v : z) v = v > 0.0 ? v : 0.0;
        a = std::move(z);
        if (activations) activations->push_back(a);
    }
    return a[0];
}

} // namespace

double mlp_forward(const MlpParams& params, std::span<const double> x) {
    return forward_impl(params, x, nullptr);
}

double mlp_backward_accumulate(const MlpParams& params, std::span<const double> x, double target,
                               MlpGrads& grads) {
    // activations[0] = input, activations[i+1] = output of layer i (post-relu
    // on hidden layers, raw on the last).
    std::vector<std::vector<double>> activations;
    activations.reserve(params.layers.size() + 1);
    double pred = forward_impl(params, x, &activations);

    const std::size_t last = params.layers.size() - 1;
    // d(pred - t)^2 / dpred
    std::vector<double> delta{2.0 * (pred - target)};
    for (std::size_t li = params.layers.size(); li-- > 0;) {
        const auto& l = params.layers[li];
        auto& gl = grads.layers[li];
        const auto& in = activations[li];
        // Hidden outputs stored post-relu; relu' masks where output == 0.
        if (li != last) {
            const auto& out = activations[li + 1];
            for (std::size_t r = 0; r < delta.size(); ++r)
                if (out[r] <= 0.0) delta[r] = 0.0;
        }
        for (std::size_t r = 0; r < l.weight.rows; ++r) {
            gl.bias[r] += delta[r];
            double* grow = gl.weight.data.data() + r * l.weight.cols;
            for (std::size_t c = 0; c < l.weight.cols; ++c) grow[c] += delta[r] * in[c];
        }
        // delta for the previous layer: W^T delta
        std::vector<double> prev(l.weight.cols, 0.0);
        for (std::size_t r = 0; r < l.weight.rows; ++r) {
            const double* wrow = l.weight.data.data() + r * l.weight.cols;
            for (std::size_t c = 0; c < l.weight.cols; ++c) prev[c] += wrow[c] * delta[r];
        }
        delta = std::move(prev);
    }
    for (std::size_t i = 0; i < delta.size(); ++i) grads.input[i] += delta[i];
    return pred;
}

MlpGrads mlp_backward(const MlpParams& params, std::span<const double> x, double target,
                      double* pred_out) {
    MlpGrads g = zero_grads_like(params);
    double pred = mlp_backward_accumulate(params, x, target, g);
    if (pred_out) *pred_out = pred;
    return g;
}

void scale_grads(MlpGrads& grads, double factor) {
    for (auto& l : grads.layers) {
        for (double& v : l.weight.data) v *= factor;
        for (double& v : l.bias) v *= factor;
    }
    for (double& v : grads.input) v *= factor;
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.empty()) throw ArgumentError("mse_loss: empty input");
    if (preds.size() != targets.size()) throw ShapeError("mse_loss: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double d = preds[i] - targets[i];
        acc += d * d;
    }
    return acc / static_cast<double>(preds.size());
}

} // namespace naspred
