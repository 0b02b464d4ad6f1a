#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "naspred/mlp.hpp"
#include "naspred/optim.hpp"
#include "naspred/rng.hpp"
#include "naspred/tensor.hpp"

namespace naspred {

// Training hyperparameters. Defaults follow the pretraining recipe: four
// layers of width 128, AdamW at 0.004 with weight decay 5e-4, cosine-annealed
// over 250 epochs, batch 128.
struct TrainConfig {
    int epochs = 250;
    double lr = 0.004;
    double weight_decay = 0.0005;
    int batch_size = 128;
    std::uint64_t seed = 0;
    double min_lr = 0.0;
    int hidden_width = 128;
    int depth = 4; // number of affine layers, output included
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool decay_biases = false;

    LrSchedule schedule() const { return {lr, min_lr, epochs}; }
    void validate() const;
    // {input_dim, hidden..., 1}
    std::vector<std::size_t> layer_dims(std::size_t input_dim) const;
};

// Few-shot adaptation defaults: 50 epochs at a tenth of the pretraining rate.
TrainConfig transfer_defaults(const TrainConfig& base = {});

// Connects a device table to the training loop: sample i reads table row
// sample_rows[i], appended to its encoded input. When trainable, gradients
// reaching the appended segment update the rows (all of them, or only
// `trainable_rows` if non-empty). Frozen rows are never touched.
struct DeviceRowsBinding {
    DenseMatrix* table = nullptr;
    const std::vector<std::size_t>* sample_rows = nullptr;
    bool trainable = false;
    std::vector<std::size_t> trainable_rows;
};

// Mini-batch training: gradients averaged over the batch, last partial batch
// kept, learning rate from the cosine schedule per epoch, single-threaded and
// bit-deterministic for a given rng state. Returns the per-epoch mean loss.
std::vector<double> fit_mlp(MlpParams& params, const DenseMatrix& inputs,
                            const std::vector<double>& targets, const TrainConfig& config,
                            Rng& rng, DeviceRowsBinding* binding = nullptr);

// Forward pass for one encoded input (plus optional device row appended).
double forward_with_row(const MlpParams& params, std::span<const double> encoded,
                        std::span<const double> device_row);

} // namespace naspred
