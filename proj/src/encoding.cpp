#include "naspred/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "naspred/errors.hpp"

namespace naspred {

const std::vector<std::string> kDefaultZcpProxies = {
    "fisher", "flops", "grad-norm", "grasp",   "l2-norm", "jacov",
    "nwot",   "params", "plain",    "snip",    "synflow", "zen-score"};

void validate_schema(const SpaceSchema& schema) {
    if (schema.space_id.empty()) throw ArgumentError("schema: space_id must be non-empty");
    if (schema.num_nodes < 0) throw ArgumentError("schema: num_nodes must be >= 0");
    if (schema.vec_length < schema.adjacency_bits())
        throw ArgumentError("schema '" + schema.space_id + "': vec_length " +
                            std::to_string(schema.vec_length) + " smaller than adjacency bits " +
                            std::to_string(schema.adjacency_bits()));
    if (schema.op_slots() > 0 && schema.ops.empty())
        throw ArgumentError("schema '" + schema.space_id + "': op slots declared but op vocabulary empty");
}

void validate_vec(const ArchitectureRecord& record, const SpaceSchema& schema) {
    if (!record.vec) return;
    const auto& v = *record.vec;
    if (static_cast<int>(v.size()) != schema.vec_length)
        throw DataError("arch '" + record.arch_id + "': vec length " + std::to_string(v.size()) +
                        " does not match schema vec_length " + std::to_string(schema.vec_length));
    int adj = schema.adjacency_bits();
    for (int i = 0; i < adj; ++i)
        if (v[i] != 0 && v[i] != 1)
            throw DataError("arch '" + record.arch_id + "': adjacency entry " + std::to_string(i) +
                            " must be 0 or 1");
    for (int i = adj; i < schema.vec_length; ++i)
        if (v[i] < 0 || v[i] >= static_cast<int>(schema.ops.size()))
            throw DataError("arch '" + record.arch_id + "': op index " + std::to_string(v[i]) +
                            " outside vocabulary of size " + std::to_string(schema.ops.size()));
}

std::string to_string(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::Vec: return "vec";
    case EncodingKind::Zcp: return "zcp";
    case EncodingKind::Hwl: return "hwl";
    case EncodingKind::ZcpVec: return "zcpvec";
    case EncodingKind::HwlVec: return "hwlvec";
    }
    return "?";
}

EncodingKind encoding_kind_from_string(const std::string& name) {
    if (name == "vec") return EncodingKind::Vec;
    if (name == "zcp") return EncodingKind::Zcp;
    if (name == "hwl") return EncodingKind::Hwl;
    if (name == "zcpvec") return EncodingKind::ZcpVec;
    if (name == "hwlvec") return EncodingKind::HwlVec;
    throw ArgumentError("unknown encoding kind '" + name + "'");
}

std::vector<std::string> EncodingMode::metric_features() const {
    if (uses_zcp()) return proxy_list;
    if (uses_hwl()) return device_list;
    return {};
}

namespace {

void check_mode(const EncodingMode& mode) {
    if (mode.uses_zcp() && mode.proxy_list.empty())
        throw ArgumentError("encoding mode " + to_string(mode.kind) + " requires a proxy list");
    if (mode.uses_hwl() && mode.device_list.empty())
        throw ArgumentError("encoding mode " + to_string(mode.kind) + " requires a device list");
}

// Raw metric value for one feature, or nullopt when the record lacks it.
std::optional<double> metric_value(const ArchitectureRecord& record, const EncodingMode& mode,
                                   const std::string& feature) {
    const auto& map = mode.uses_zcp() ? record.zcp : record.latency_ms;
    auto it = map.find(feature);
    if (it == map.end()) return std::nullopt;
    return it->second;
}

} // namespace

double Normalizer::transform(std::size_t feature, double raw) const {
    double lo = feature_min[feature];
    double hi = feature_max[feature];
    if (hi <= lo) return 0.5; // degenerate feature rule
    double v = (raw - lo) / (hi - lo);
    return std::clamp(v, -0.5, 1.5);
}

Normalizer fit_normalizer(const std::vector<ArchitectureRecord>& records,
                          const EncodingMode& mode) {
    check_mode(mode);
    if (records.size() < 2)
        throw ArgumentError("fit_normalizer: need at least 2 records, got " +
                            std::to_string(records.size()));
    Normalizer norm;
    norm.feature_names = mode.metric_features();
    norm.feature_min.assign(norm.size(), std::numeric_limits<double>::infinity());
    norm.feature_max.assign(norm.size(), -std::numeric_limits<double>::infinity());
    norm.feature_mean.assign(norm.size(), 0.0);
    for (const auto& record : records) {
        for (std::size_t f = 0; f < norm.size(); ++f) {
            auto value = metric_value(record, mode, norm.feature_names[f]);
            if (!value)
                throw DataError("fit_normalizer: arch '" + record.arch_id +
                                "' is missing feature '" + norm.feature_names[f] + "'");
            norm.feature_min[f] = std::min(norm.feature_min[f], *value);
            norm.feature_max[f] = std::max(norm.feature_max[f], *value);
            norm.feature_mean[f] += *value;
        }
    }
    for (std::size_t f = 0; f < norm.size(); ++f)
        norm.feature_mean[f] /= static_cast<double>(records.size());
    norm.fitted = true;
    return norm;
}

std::size_t encoding_dim(const EncodingMode& mode, const SpaceSchema* schema) {
    check_mode(mode);
    std::size_t dim = mode.metric_features().size();
    if (mode.uses_vec()) {
        if (!schema)
            throw ArgumentError("encoding_dim: " + to_string(mode.kind) +
                                " needs a space schema");
        dim += static_cast<std::size_t>(schema->vec_length);
    }
    return dim;
}

std::vector<double> encode(const ArchitectureRecord& record, const EncodingMode& mode,
                           const Normalizer& norm, const SpaceSchema* schema,
                           const EncodeOptions& options) {
    check_mode(mode);
    auto metrics = mode.metric_features();
    if (!metrics.empty()) {
        if (!norm.fitted) throw StateError("encode: normalizer not fitted");
        if (norm.feature_names != metrics)
            throw StateError("encode: normalizer was fitted for a different feature list");
    }
    std::vector<double> out;
    out.reserve(encoding_dim(mode, schema));
    for (std::size_t f = 0; f < metrics.size(); ++f) {
        auto value = metric_value(record, mode, metrics[f]);
        if (!value) {
            if (!options.impute_missing)
                throw DataError("encode: arch '" + record.arch_id + "' is missing feature '" +
                                metrics[f] + "'");
            value = norm.feature_mean[f];
        }
        out.push_back(norm.transform(f, *value));
    }
    if (mode.uses_vec()) {
        if (!schema)
            throw ArgumentError("encode: " + to_string(mode.kind) + " needs a space schema");
        if (!record.vec)
            throw DataError("encode: arch '" + record.arch_id + "' has no vec encoding");
        validate_vec(record, *schema);
        for (int v : *record.vec) out.push_back(static_cast<double>(v));
    }
    return out;
}

} // namespace naspred
