#include "naspred/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "naspred/errors.hpp"

namespace naspred {

void TrainConfig::validate() const {
    if (epochs < 1) throw ArgumentError("train config: epochs must be >= 1");
    if (!(lr > 0.0)) throw ArgumentError("train config: lr must be > 0");
    if (batch_size < 1) throw ArgumentError("train config: batch_size must be >= 1");
    if (min_lr < 0.0 || min_lr > lr)
        throw ArgumentError("train config: need 0 <= min_lr <= lr");
    if (hidden_width < 1 || depth < 1)
        throw ArgumentError("train config: width and depth must be >= 1");
}

std::vector<std::size_t> TrainConfig::layer_dims(std::size_t input_dim) const {
    std::vector<std::size_t> dims{input_dim};
    for (int i = 0; i < depth - 1; ++i) dims.push_back(static_cast<std::size_t>(hidden_width));
    dims.push_back(1);
    return dims;
}

TrainConfig transfer_defaults(const TrainConfig& base) {
    TrainConfig cfg = base;
    cfg.epochs = 50;
    cfg.lr = 0.0004;
    return cfg;
}

double forward_with_row(const MlpParams& params, std::span<const double> encoded,
                        std::span<const double> device_row) {
    if (device_row.empty()) return mlp_forward(params, encoded);
    std::vector<double> x;
    x.reserve(encoded.size() + device_row.size());
    x.insert(x.end(), encoded.begin(), encoded.end());
    x.insert(x.end(), device_row.begin(), device_row.end());
    return mlp_forward(params, x);
}

std::vector<double> fit_mlp(MlpParams& params, const DenseMatrix& inputs,
                            const std::vector<double>& targets, const TrainConfig& config,
                            Rng& rng, DeviceRowsBinding* binding) {
    config.validate();
    const std::size_t n = inputs.rows;
    if (n == 0) throw ArgumentError("fit_mlp: empty training set");
    if (targets.size() != n) throw ShapeError("fit_mlp: target count mismatch");

    std::size_t row_dim = 0;
    if (binding && binding->table) {
        row_dim = binding->table->cols;
        if (!binding->sample_rows || binding->sample_rows->size() != n)
            throw ShapeError("fit_mlp: device row assignment missing or mismatched");
    }
    if (params.input_dim() != inputs.cols + row_dim)
        throw ShapeError("fit_mlp: mlp input dim does not match encoded dim + device dim");

    const bool rows_trainable = binding && binding->trainable;
    // The device table registers as one extra optimizer tensor after the MLP.
    std::vector<std::size_t> sizes;
    for (const auto& l : params.layers) {
        sizes.push_back(l.weight.data.size());
        sizes.push_back(l.bias.size());
    }
    if (rows_trainable) sizes.push_back(binding->table->data.size());
    OptimizerState opt =
        make_optimizer_state(sizes, config.weight_decay, config.beta1, config.beta2, config.eps);
    LrSchedule schedule = config.schedule();

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    MlpGrads grads = zero_grads_like(params);
    DenseMatrix row_grads;
    std::vector<char> row_touched;
    std::vector<char> row_allowed;
    if (rows_trainable) {
        row_grads = DenseMatrix(binding->table->rows, binding->table->cols);
        row_touched.assign(binding->table->rows, 0);
        row_allowed.assign(binding->table->rows,
                           binding->trainable_rows.empty() ? 1 : 0);
        for (std::size_t r : binding->trainable_rows) row_allowed[r] = 1;
    }

    std::vector<double> x(inputs.cols + row_dim);
    std::vector<double> epoch_losses;
    epoch_losses.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double lr = cosine_lr(schedule, std::min(epoch, schedule.total_epochs));
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            std::size_t end = std::min(n, start + static_cast<std::size_t>(config.batch_size));
            double inv = 1.0 / static_cast<double>(end - start);

            for (auto& l : grads.layers) {
                std::fill(l.weight.data.begin(), l.weight.data.end(), 0.0);
                std::fill(l.bias.begin(), l.bias.end(), 0.0);
            }
            std::fill(grads.input.begin(), grads.input.end(), 0.0);
            if (rows_trainable) {
                std::fill(row_grads.data.begin(), row_grads.data.end(), 0.0);
                std::fill(row_touched.begin(), row_touched.end(), 0);
            }

            for (std::size_t k = start; k < end; ++k) {
                std::size_t i = order[k];
                auto enc = inputs.row(i);
                std::copy(enc.begin(), enc.end(), x.begin());
                std::size_t row_index = 0;
                if (row_dim > 0) {
                    row_index = (*binding->sample_rows)[i];
                    auto row = binding->table->row(row_index);
                    std::copy(row.begin(), row.end(), x.begin() + inputs.cols);
                }
                std::fill(grads.input.begin(), grads.input.end(), 0.0);
                double pred_before = mlp_backward_accumulate(params, x, targets[i], grads);
                double diff = pred_before - targets[i];
                loss_sum += diff * diff;
                if (rows_trainable && row_allowed[row_index]) {
                    row_touched[row_index] = 1;
                    auto g = row_grads.row(row_index);
                    for (std::size_t d = 0; d < row_dim; ++d)
                        g[d] += grads.input[inputs.cols + d] * inv;
                }
            }
            for (auto& l : grads.layers) {
                for (double& v : l.weight.data) v *= inv;
                for (double& v : l.bias) v *= inv;
            }

            std::vector<ParamRef> refs;
            refs.reserve(params.layers.size() * 2 + 1);
            for (std::size_t li = 0; li < params.layers.size(); ++li) {
                refs.push_back({std::span<double>(params.layers[li].weight.data),
                                std::span<const double>(grads.layers[li].weight.data), true});
                refs.push_back({std::span<double>(params.layers[li].bias),
                                std::span<const double>(grads.layers[li].bias),
                                config.decay_biases});
            }
            if (rows_trainable)
                refs.push_back({std::span<double>(binding->table->data),
                                std::span<const double>(row_grads.data), false});
            adamw_step(refs, opt, lr);
        }
        double epoch_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_loss))
            throw NumericError("fit_mlp: non-finite loss at epoch " + std::to_string(epoch));
        epoch_losses.push_back(epoch_loss);
    }
    return epoch_losses;
}

} // namespace naspred
