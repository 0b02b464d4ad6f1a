#include "naspred/hw_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "naspred/errors.hpp"
#include "naspred/metrics.hpp"

namespace naspred {

std::string to_string(HwEmbeddingKind kind) {
    switch (kind) {
    case HwEmbeddingKind::Sample: return "sample";
    case HwEmbeddingKind::Index: return "index";
    case HwEmbeddingKind::Table: return "table";
    }
    return "?";
}

HwEmbeddingKind hw_embedding_kind_from_string(const std::string& name) {
    if (name == "sample") return HwEmbeddingKind::Sample;
    if (name == "index") return HwEmbeddingKind::Index;
    if (name == "table") return HwEmbeddingKind::Table;
    throw ArgumentError("unknown hw embedding kind '" + name + "'");
}

std::vector<double> index_embedding(std::size_t ordinal, std::size_t width) {
    if (width == 0) throw ArgumentError("index_embedding: width must be >= 1");
    if (width < 64 && ordinal >= (std::size_t{1} << width))
        throw RangeError("index_embedding: ordinal " + std::to_string(ordinal) +
                         " does not fit in " + std::to_string(width) + " bits");
    std::vector<double> bits(width, 0.0);
    for (std::size_t i = 0; i < width; ++i)
        bits[width - 1 - i] = static_cast<double>((ordinal >> i) & 1u);
    return bits;
}

std::size_t decode_index_embedding(std::span<const double> bits) {
    std::size_t value = 0;
    for (double b : bits) value = (value << 1) | (b != 0.0 ? 1u : 0u);
    return value;
}

std::vector<double> sample_embedding(const std::map<std::string, double>& device_latencies,
                                     const std::vector<std::string>& reference_archs,
                                     const Normalizer& norm) {
    if (!norm.fitted) throw StateError("sample_embedding: normalizer not fitted");
    std::vector<std::string> missing;
    std::vector<double> out;
    out.reserve(reference_archs.size());
    for (std::size_t i = 0; i < reference_archs.size(); ++i) {
        auto it = device_latencies.find(reference_archs[i]);
        if (it == device_latencies.end()) {
            missing.push_back(reference_archs[i]);
            continue;
        }
        out.push_back(norm.transform(i, it->second));
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw DataError("sample_embedding: device has no measurement for: " + list);
    }
    return out;
}

bool DeviceTable::has_device(const std::string& device_id) const {
    return std::find(device_ids.begin(), device_ids.end(), device_id) != device_ids.end();
}

std::size_t DeviceTable::ordinal_of(const std::string& device_id) const {
    auto it = std::find(device_ids.begin(), device_ids.end(), device_id);
    if (it == device_ids.end()) throw LookupError("unknown device '" + device_id + "'");
    return static_cast<std::size_t>(it - device_ids.begin());
}

DeviceTable make_embedding_table(const std::vector<std::string>& device_ids, std::size_t dim,
                                 Rng& rng) {
    if (dim == 0) throw ArgumentError("make_embedding_table: dim must be >= 1");
    DeviceTable table;
    table.kind = HwEmbeddingKind::Table;
    table.trainable = true;
    table.device_ids = device_ids;
    table.rows = DenseMatrix(device_ids.size(), dim);
    for (double& v : table.rows.data) v = rng.uniform(-0.1, 0.1);
    return table;
}

DeviceTable make_index_table(const std::vector<std::string>& device_ids, std::size_t width) {
    std::size_t need = 1;
    while ((std::size_t{1} << need) < device_ids.size()) ++need;
    if (width < need)
        throw ArgumentError("make_index_table: width " + std::to_string(width) +
                            " cannot index " + std::to_string(device_ids.size()) + " devices");
    DeviceTable table;
    table.kind = HwEmbeddingKind::Index;
    table.trainable = false;
    table.index_width = width;
    table.device_ids = device_ids;
    table.rows = DenseMatrix(device_ids.size(), width);
    for (std::size_t i = 0; i < device_ids.size(); ++i) {
        auto bits = index_embedding(i, width);
        std::copy(bits.begin(), bits.end(), table.rows.row(i).begin());
    }
    return table;
}

DeviceTable make_sample_table(const BenchmarkDataset& dataset,
                              const std::vector<std::string>& device_ids,
                              const std::vector<std::string>& reference_archs) {
    if (reference_archs.empty())
        throw ArgumentError("make_sample_table: need at least one reference arch");
    DeviceTable table;
    table.kind = HwEmbeddingKind::Sample;
    table.trainable = false;
    table.reference_archs = reference_archs;
    table.device_ids = device_ids;

    // Normalizer features are the reference archs; the fitting "records" are
    // the training devices' latency vectors.
    Normalizer norm;
    norm.feature_names = reference_archs;
    norm.feature_min.assign(reference_archs.size(), std::numeric_limits<double>::infinity());
    norm.feature_max.assign(reference_archs.size(), -std::numeric_limits<double>::infinity());
    norm.feature_mean.assign(reference_archs.size(), 0.0);
    for (const auto& device : device_ids) {
        for (std::size_t f = 0; f < reference_archs.size(); ++f) {
            const auto& rec = dataset.record(reference_archs[f]);
            auto it = rec.latency_ms.find(device);
            if (it == rec.latency_ms.end())
                throw DataError("make_sample_table: reference arch '" + reference_archs[f] +
                                "' has no latency for device '" + device + "'");
            norm.feature_min[f] = std::min(norm.feature_min[f], it->second);
            norm.feature_max[f] = std::max(norm.feature_max[f], it->second);
            norm.feature_mean[f] += it->second;
        }
    }
    for (std::size_t f = 0; f < reference_archs.size(); ++f)
        norm.feature_mean[f] /= static_cast<double>(device_ids.size());
    norm.fitted = true;
    table.sample_norm = std::move(norm);

    table.rows = DenseMatrix(device_ids.size(), reference_archs.size());
    for (std::size_t d = 0; d < device_ids.size(); ++d) {
        std::map<std::string, double> lat;
        for (const auto& arch : reference_archs)
            lat[arch] = dataset.record(arch).latency_ms.at(device_ids[d]);
        auto row = sample_embedding(lat, reference_archs, table.sample_norm);
        std::copy(row.begin(), row.end(), table.rows.row(d).begin());
    }
    return table;
}

std::vector<double> lookup(const DeviceTable& table, const std::string& device_id) {
    auto row = table.rows.row(table.ordinal_of(device_id));
    return {row.begin(), row.end()};
}

DonorChoice init_new_device(DeviceTable& table, const std::string& new_device_id,
                            const std::vector<std::string>& sample_arch_ids,
                            const std::vector<double>& new_device_latencies,
                            const std::map<std::string, std::vector<double>>& train_columns) {
    if (table.kind != HwEmbeddingKind::Table)
        throw StateError("init_new_device: donor initialization applies to table embeddings");
    if (table.has_device(new_device_id))
        throw ArgumentError("init_new_device: device '" + new_device_id + "' already registered");
    if (sample_arch_ids.size() < 2)
        throw ArgumentError("init_new_device: need at least 2 sample architectures");
    if (new_device_latencies.size() != sample_arch_ids.size())
        throw ArgumentError("init_new_device: latency count does not match sample archs");

    DonorChoice best{"", -2.0};
    std::size_t best_ordinal = 0;
    for (std::size_t d = 0; d < table.device_ids.size(); ++d) {
        const auto& device = table.device_ids[d];
        auto it = train_columns.find(device);
        if (it == train_columns.end())
            throw DataError("init_new_device: no sample latencies for training device '" +
                            device + "'");
        if (it->second.size() != sample_arch_ids.size())
            throw DataError("init_new_device: training device '" + device +
                            "' is missing a sample latency");
        double rho = spearman_rho(it->second, new_device_latencies);
        // strict > keeps the lowest ordinal on ties
        if (best.donor_id.empty() || rho > best.rho) {
            best.donor_id = device;
            best.rho = rho;
            best_ordinal = d;
        }
    }
    if (best.donor_id.empty()) throw ArgumentError("init_new_device: table has no devices");

    auto donor_row = table.rows.row(best_ordinal);
    DenseMatrix grown(table.rows.rows + 1, table.rows.cols);
    std::copy(table.rows.data.begin(), table.rows.data.end(), grown.data.begin());
    std::copy(donor_row.begin(), donor_row.end(), grown.row(table.rows.rows).begin());
    table.rows = std::move(grown);
    table.device_ids.push_back(new_device_id);
    return best;
}

void register_index_device(DeviceTable& table, const std::string& device_id) {
    if (table.kind != HwEmbeddingKind::Index)
        throw StateError("register_index_device: table is not index mode");
    if (table.has_device(device_id))
        throw ArgumentError("device '" + device_id + "' already registered");
    auto bits = index_embedding(table.device_ids.size(), table.index_width);
    DenseMatrix grown(table.rows.rows + 1, table.rows.cols);
    std::copy(table.rows.data.begin(), table.rows.data.end(), grown.data.begin());
    std::copy(bits.begin(), bits.end(), grown.row(table.rows.rows).begin());
    table.rows = std::move(grown);
    table.device_ids.push_back(device_id);
}

void register_sample_device(DeviceTable& table, const std::string& device_id,
                            const std::map<std::string, double>& device_latencies) {
    if (table.kind != HwEmbeddingKind::Sample)
        throw StateError("register_sample_device: table is not sample mode");
    if (table.has_device(device_id))
        throw ArgumentError("device '" + device_id + "' already registered");
    auto row = sample_embedding(device_latencies, table.reference_archs, table.sample_norm);
    DenseMatrix grown(table.rows.rows + 1, table.rows.cols);
    std::copy(table.rows.data.begin(), table.rows.data.end(), grown.data.begin());
    std::copy(row.begin(), row.end(), grown.row(table.rows.rows).begin());
    table.rows = std::move(grown);
    table.device_ids.push_back(device_id);
}

} // namespace naspred
