#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "naspred/dataio.hpp"
#include "naspred/encoding.hpp"
#include "naspred/rng.hpp"
#include "naspred/tensor.hpp"

namespace naspred {

enum class HwEmbeddingKind { Sample, Index, Table };

std::string to_string(HwEmbeddingKind kind);
HwEmbeddingKind hw_embedding_kind_from_string(const std::string& name);

// Big-endian binary expansion of the ordinal, entries in {0.0, 1.0}.
std::vector<double> index_embedding(std::size_t ordinal, std::size_t width);
std::size_t decode_index_embedding(std::span<const double> bits);

// Measured latencies of the fixed reference architectures, in reference order,
// min-max scaled with the training-device normalizer.
std::vector<double> sample_embedding(const std::map<std::string, double>& device_latencies,
                                     const std::vector<std::string>& reference_archs,
                                     const Normalizer& norm);

// One row per registered device. Only Table rows are trainable; Sample and
// Index rows are computed from measurements / ordinals.
struct DeviceTable {
    HwEmbeddingKind kind = HwEmbeddingKind::Table;
    std::vector<std::string> device_ids;
    DenseMatrix rows; // |devices| x dim
    bool trainable = false;

    // Sample mode
    std::vector<std::string> reference_archs;
    Normalizer sample_norm; // per-reference-arch scaling over training devices
    // Index mode
    std::size_t index_width = 0;

    std::size_t dim() const { return rows.cols; }
    std::size_t size() const { return rows.rows; }
    bool has_device(const std::string& device_id) const;
    std::size_t ordinal_of(const std::string& device_id) const; // throws LookupError
};

// Table mode, rows uniform in [-0.1, 0.1]. dim defaults to 8.
DeviceTable make_embedding_table(const std::vector<std::string>& device_ids, std::size_t dim,
                                 Rng& rng);

// Index mode; width must cover the ordinals (>= ceil(log2(count))).
DeviceTable make_index_table(const std::vector<std::string>& device_ids, std::size_t width);

// Sample mode: fits the per-reference-arch normalizer over the training
// devices' latencies, then builds each row.
DeviceTable make_sample_table(const BenchmarkDataset& dataset,
                              const std::vector<std::string>& device_ids,
                              const std::vector<std::string>& reference_archs);

// Row i, verbatim.
std::vector<double> lookup(const DeviceTable& table, const std::string& device_id);

struct DonorChoice {
    std::string donor_id;
    double rho;
};

// Registers a new device whose row copies the training device maximizing
// Spearman correlation between the two devices' latencies on the shared sample
// architectures. Ties resolve to the lowest ordinal. Table mode only.
//
// sample_arch_ids / new_device_latencies are the same architectures later used
// for fine-tuning; train_columns maps each training device to its latencies on
// those architectures, in the same order.
DonorChoice init_new_device(DeviceTable& table, const std::string& new_device_id,
                            const std::vector<std::string>& sample_arch_ids,
                            const std::vector<double>& new_device_latencies,
                            const std::map<std::string, std::vector<double>>& train_columns);

// Registers a new device in Index mode (next ordinal) or Sample mode (scaled
// measured latencies of the reference architectures).
void register_index_device(DeviceTable& table, const std::string& device_id);
void register_sample_device(DeviceTable& table, const std::string& device_id,
                            const std::map<std::string, double>& device_latencies);

} // namespace naspred
