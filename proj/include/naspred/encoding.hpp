#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace naspred {

// Canonical zero-cost proxy names; datasets may carry any subset or superset.
extern const std::vector<std::string> kDefaultZcpProxies;

// One candidate network and its ingested metrics.
struct ArchitectureRecord {
    std::string arch_id;
    std::string space_id;
    // Flattened adjacency bits (row-major upper triangle) followed by
    // operation indices into the space schema's op vocabulary.
    std::optional<std::vector<int>> vec;
    std::map<std::string, double> zcp;        // proxy name -> raw score
    std::map<std::string, double> latency_ms; // device id -> raw milliseconds
    std::optional<double> accuracy;           // in [0, 1]
};

// Per-space declaration fixing the Vec layout.
struct SpaceSchema {
    std::string space_id;
    int num_nodes = 0;
    std::vector<std::string> ops;
    int vec_length = 0;

    int adjacency_bits() const { return num_nodes * (num_nodes - 1) / 2; }
    int op_slots() const { return vec_length - adjacency_bits(); }
};

void validate_schema(const SpaceSchema& schema);
void validate_vec(const ArchitectureRecord& record, const SpaceSchema& schema);

enum class EncodingKind { Vec, Zcp, Hwl, ZcpVec, HwlVec };

std::string to_string(EncodingKind kind);
EncodingKind encoding_kind_from_string(const std::string& name);

// Which features feed the predictor, and in what order. proxy_list /
// device_list ordering is fixed for a model's lifetime.
struct EncodingMode {
    EncodingKind kind = EncodingKind::Zcp;
    std::vector<std::string> proxy_list;  // for Zcp / ZcpVec
    std::vector<std::string> device_list; // for Hwl / HwlVec

    bool uses_zcp() const { return kind == EncodingKind::Zcp || kind == EncodingKind::ZcpVec; }
    bool uses_hwl() const { return kind == EncodingKind::Hwl || kind == EncodingKind::HwlVec; }
    bool uses_vec() const {
        return kind == EncodingKind::Vec || kind == EncodingKind::ZcpVec ||
               kind == EncodingKind::HwlVec;
    }
    // Pure metric encodings have the same length on every search space, which
    // is what licenses cross-space transfer.
    bool space_independent() const { return kind == EncodingKind::Zcp || kind == EncodingKind::Hwl; }
    // Metric feature names in encoding order (empty for Vec).
    std::vector<std::string> metric_features() const;
};

// Per-feature min-max fitted on a reference set. Transform maps the fitted
// range to [0,1]; out-of-range transfer-time inputs are clipped to [-0.5, 1.5];
// a constant feature maps to 0.5.
struct Normalizer {
    std::vector<std::string> feature_names;
    std::vector<double> feature_min;
    std::vector<double> feature_max;
    std::vector<double> feature_mean; // training-set mean, used by opt-in imputation
    bool fitted = false;

    std::size_t size() const { return feature_names.size(); }
    double transform(std::size_t feature, double raw) const;
};

struct EncodeOptions {
    // Impute a missing metric with the training-set feature mean instead of
    // raising. Off by default: silent imputation can fake transfer results.
    bool impute_missing = false;
};

Normalizer fit_normalizer(const std::vector<ArchitectureRecord>& records, const EncodingMode& mode);

std::vector<double> encode(const ArchitectureRecord& record, const EncodingMode& mode,
                           const Normalizer& norm, const SpaceSchema* schema = nullptr,
                           const EncodeOptions& options = {});

std::size_t encoding_dim(const EncodingMode& mode, const SpaceSchema* schema = nullptr);

} // namespace naspred
