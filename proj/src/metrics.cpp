#include "naspred/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "naspred/errors.hpp"

namespace naspred {

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the mean 1-based rank
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
    double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
    double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw CorrelationError("spearman_rho: zero rank variance");
    return cov / std::sqrt(var_a * var_b);
}

} // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ArgumentError("spearman_rho: length mismatch");
    if (a.size() < 2) throw CorrelationError("spearman_rho: need at least 2 values");
    auto ra = average_ranks(a);
    auto rb = average_ranks(b);
    return pearson(ra, rb);
}

bool CorrelationMatrix::has(std::size_t i, std::size_t j) const {
    return std::isfinite(rho.at(i, j));
}

std::size_t CorrelationMatrix::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw LookupError("correlation matrix has no label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

CorrelationMatrix correlation_matrix(const BenchmarkDataset& dataset, CorrelationKind kind) {
    CorrelationMatrix out;
    out.labels = kind == CorrelationKind::Devices ? dataset.device_ids : dataset.proxy_names;
    const std::size_t n = out.labels.size();
    if (n < 2) throw ArgumentError("correlation_matrix: need at least 2 columns");
    out.rho = DenseMatrix(n, n);

    // column values per record, NaN when absent
    DenseMatrix columns(dataset.records.size(), n);
    for (std::size_t r = 0; r < dataset.records.size(); ++r) {
        const auto& rec = dataset.records[r];
        const auto& map = kind == CorrelationKind::Devices ? rec.latency_ms : rec.zcp;
        for (std::size_t c = 0; c < n; ++c) {
            auto it = map.find(out.labels[c]);
            columns.at(r, c) =
                it == map.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        out.rho.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<double> a, b;
            for (std::size_t r = 0; r < dataset.records.size(); ++r) {
                double va = columns.at(r, i);
                double vb = columns.at(r, j);
                if (std::isfinite(va) && std::isfinite(vb)) {
                    a.push_back(va);
                    b.push_back(vb);
                }
            }
            double value = std::numeric_limits<double>::quiet_NaN();
            if (a.size() >= 2) {
                try {
                    value = spearman_rho(a, b);
                } catch (const CorrelationError&) {
                    // degenerate pair stays missing
                }
            }
            if (!std::isfinite(value)) out.missing_pairs.emplace_back(i, j);
            out.rho.at(i, j) = value;
            out.rho.at(j, i) = value;
        }
    }
    return out;
}

std::vector<ClosestDevice> closest_train_device(const DeviceSplit& split,
                                                const CorrelationMatrix& matrix) {
    std::vector<ClosestDevice> out;
    out.reserve(split.test_ids.size());
    for (const auto& test : split.test_ids) {
        std::size_t ti = matrix.index_of(test);
        bool found = false;
        ClosestDevice best{test, "", -std::numeric_limits<double>::infinity()};
        for (const auto& train : split.train_ids) {
            std::size_t si = matrix.index_of(train);
            if (!matrix.has(ti, si)) continue;
            double rho = matrix.rho.at(ti, si);
            if (!found || rho > best.rho) {
                best.donor_id = train;
                best.rho = rho;
                found = true;
            }
        }
        if (!found)
            throw LookupError("closest_train_device: no covered training device for '" + test +
                              "'");
        out.push_back(best);
    }
    return out;
}

DeviceSplit build_adversarial_split(const CorrelationMatrix& matrix,
                                    const std::vector<std::string>& test_ids, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw ArgumentError("build_adversarial_split: threshold must be in (0, 1]");
    DeviceSplit split;
    split.test_ids = test_ids;
    std::vector<std::size_t> test_idx;
    test_idx.reserve(test_ids.size());
    for (const auto& id : test_ids) test_idx.push_back(matrix.index_of(id));

    for (std::size_t c = 0; c < matrix.labels.size(); ++c) {
        if (std::find(test_idx.begin(), test_idx.end(), c) != test_idx.end()) continue;
        bool keep = true;
        for (std::size_t ti : test_idx) {
            if (matrix.has(ti, c) && matrix.rho.at(ti, c) >= threshold) {
                keep = false;
                break;
            }
        }
        if (keep) split.train_ids.push_back(matrix.labels[c]);
    }
    if (split.train_ids.empty())
        throw SplitError("build_adversarial_split: no training device survives threshold " +
                         std::to_string(threshold));
    for (std::size_t ti : test_idx) {
        double max_rho = -std::numeric_limits<double>::infinity();
        for (const auto& train : split.train_ids) {
            std::size_t si = matrix.index_of(train);
            if (matrix.has(ti, si)) max_rho = std::max(max_rho, matrix.rho.at(ti, si));
        }
        split.per_test_max_train_rho.push_back(max_rho);
    }
    return split;
}

std::string correlation_matrix_csv(const CorrelationMatrix& matrix, bool bucketed) {
    std::string out = "label";
    for (const auto& l : matrix.labels) out += "," + l;
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
        out += matrix.labels[i];
        for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
            double v = matrix.rho.at(i, j);
            if (!std::isfinite(v)) {
                out += ",nan";
                continue;
            }
            if (bucketed) v = v >= 0.7 ? 1.0 : (v >= 0.5 ? 0.5 : 0.0);
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace naspred
