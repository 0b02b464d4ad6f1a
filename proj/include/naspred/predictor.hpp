#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "naspred/dataio.hpp"
#include "naspred/encoding.hpp"
#include "naspred/hw_embedding.hpp"
#include "naspred/trainer.hpp"

namespace naspred {

enum class PredictionTaskKind { Accuracy, Latency };

std::string to_string(PredictionTaskKind kind);
PredictionTaskKind task_kind_from_string(const std::string& name);

struct PredictionTask {
    PredictionTaskKind kind = PredictionTaskKind::Accuracy;
    std::string space_id;
    std::optional<std::string> device_id; // required for latency
    std::vector<std::string> train_ids;
    std::vector<std::string> eval_ids;
};

// Min-max over training targets; prediction un-scales back to native units.
struct TargetScaler {
    double min = 0.0;
    double max = 1.0;
    bool fitted = false;

    double scale(double raw) const;
    double unscale(double scaled) const;
};

TargetScaler fit_target_scaler(const std::vector<double>& targets);

struct Provenance {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

struct PredictorModel {
    MlpParams mlp;
    EncodingMode mode;
    Normalizer normalizer;
    SpaceSchema schema; // meaningful for Vec-bearing modes
    std::optional<DeviceTable> device_table;
    TargetScaler target_scaler;
    PredictionTaskKind task_kind = PredictionTaskKind::Accuracy;
    Provenance provenance;
    EncodeOptions encode_options;
    std::vector<double> train_losses; // last training run, per epoch

    std::size_t input_dim() const { return mlp.input_dim(); }
};

// True target of a record under a task kind.
double resolve_target(const ArchitectureRecord& record, PredictionTaskKind kind,
                      const std::optional<std::string>& device_id);

std::uint64_t hash_config(const TrainConfig& config, const EncodingMode& mode);

// Trains f from scratch on the task's train split. No device table.
PredictorModel train_scratch(const BenchmarkDataset& dataset, const PredictionTask& task,
                             const EncodingMode& mode, const TrainConfig& config);

// Same machinery with caller-supplied targets (used by the search loop).
PredictorModel train_on_pairs(const BenchmarkDataset& dataset,
                              const std::vector<std::string>& arch_ids,
                              const std::vector<double>& targets, PredictionTaskKind kind,
                              const EncodingMode& mode, const TrainConfig& config);

// Pretrains one latency regressor over a set of training devices, with the
// device represented by a Sample / Index / Table embedding concatenated to the
// architecture encoding. pair_budget (arch, device) pairs are drawn uniformly
// without replacement from the grid; 0 means the full grid.
struct MultiDevicePretrainSpec {
    std::vector<std::string> train_devices;
    std::vector<std::string> arch_pool; // architectures available for pretraining
    std::size_t pair_budget = 0;
    HwEmbeddingKind hw_kind = HwEmbeddingKind::Table;
    std::size_t embedding_dim = 8; // Table mode row width
    std::size_t index_width = 8;   // Index mode bit width
    std::vector<std::string> reference_archs; // Sample mode; defaults to first 10 of the pool
};

PredictorModel pretrain_latency_multi_device(const BenchmarkDataset& dataset,
                                             const MultiDevicePretrainSpec& spec,
                                             const EncodingMode& mode, const TrainConfig& config);

struct FinetuneDeviceResult {
    PredictorModel model;
    std::optional<DonorChoice> donor; // Table mode only
};

// Few-shot adaptation to a new device: registers it in the device table
// (donor-copied row for Table mode), then fine-tunes all MLP parameters plus
// that row on the sample architectures. Other rows stay frozen. epochs == 0
// performs initialization only.
FinetuneDeviceResult finetune_device(const PredictorModel& model, const BenchmarkDataset& dataset,
                                     const std::string& device_id,
                                     const std::vector<std::string>& sample_arch_ids,
                                     const TrainConfig& config);

struct FinetuneSpaceOptions {
    // Refit the normalizer on the target samples instead of reusing the
    // source-fitted one (out-of-range values clip either way).
    bool refit_normalizer = false;
};

// Few-shot adaptation across search spaces; only space-independent encodings
// (Zcp, Hwl) can cross. The target scaler is refitted on the target samples.
PredictorModel finetune_space(const PredictorModel& model, const BenchmarkDataset& target_dataset,
                              const PredictionTask& target_task, const TrainConfig& config,
                              const FinetuneSpaceOptions& options = {});

// Device id must be given iff the model has a device table.
std::vector<double> predict(const PredictorModel& model,
                            const std::vector<ArchitectureRecord>& records,
                            const std::optional<std::string>& device_id = std::nullopt);
double predict_one(const PredictorModel& model, const ArchitectureRecord& record,
                   const std::optional<std::string>& device_id = std::nullopt);

// Spearman between predictions and true targets over the given arch ids.
double evaluate_rho(const PredictorModel& model, const BenchmarkDataset& dataset,
                    const std::vector<std::string>& arch_ids,
                    const std::optional<std::string>& device_id = std::nullopt);

// Versioned JSON checkpoint carrying every field including provenance.
void save_checkpoint(const PredictorModel& model, const std::string& path);
PredictorModel load_checkpoint(const std::string& path);

// Rejects datasets whose features cannot feed this model (missing proxies or
// devices, mismatched vec length).
void check_compatible(const PredictorModel& model, const BenchmarkDataset& dataset);

} // namespace naspred
