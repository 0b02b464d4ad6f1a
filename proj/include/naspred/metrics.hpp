#pragma once

#include <span>
#include <string>
#include <vector>

#include "naspred/dataio.hpp"
#include "naspred/tensor.hpp"

namespace naspred {

// Average ("fractional") ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average-tied ranks, in [-1, 1].
double spearman_rho(std::span<const double> a, std::span<const double> b);

enum class CorrelationKind { Devices, Proxies };

// Pairwise Spearman over the architectures common to each pair of columns.
// Pairs with fewer than 2 shared architectures (or degenerate ranks) are
// flagged missing, never fabricated.
struct CorrelationMatrix {
    std::vector<std::string> labels;
    DenseMatrix rho; // NaN where missing
    std::vector<std::pair<std::size_t, std::size_t>> missing_pairs;

    bool has(std::size_t i, std::size_t j) const;
    std::size_t index_of(const std::string& label) const; // throws LookupError
};

CorrelationMatrix correlation_matrix(const BenchmarkDataset& dataset, CorrelationKind kind);

struct DeviceSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    // Per test device: max correlation against any retained training device.
    std::vector<double> per_test_max_train_rho;
};

struct ClosestDevice {
    std::string test_id;
    std::string donor_id;
    double rho;
};

// The task-distance diagnostic: for each test device, the max-rho training device.
std::vector<ClosestDevice> closest_train_device(const DeviceSplit& split,
                                                const CorrelationMatrix& matrix);

// Keeps every non-test device whose correlation with each test device is below
// the threshold.
DeviceSplit build_adversarial_split(const CorrelationMatrix& matrix,
                                    const std::vector<std::string>& test_ids, double threshold);

// CSV with header row/column labels; missing pairs serialize as "nan". With
// bucketed=true, values map to {0, 0.5, 1} at the 0.5 / 0.7 thresholds.
std::string correlation_matrix_csv(const CorrelationMatrix& matrix, bool bucketed = false);

} // namespace naspred
