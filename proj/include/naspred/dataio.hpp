#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "naspred/encoding.hpp"

namespace naspred {

// A search space's ingested records plus the device / proxy universe.
struct BenchmarkDataset {
    std::string space_id;
    SpaceSchema schema;
    std::vector<ArchitectureRecord> records;
    std::vector<std::string> device_ids;  // union over records, sorted
    std::vector<std::string> proxy_names; // union over records, sorted
    // arch_ids of records missing some device/proxy carried by others
    std::vector<std::string> partial_records;

    const ArchitectureRecord& record(const std::string& arch_id) const; // throws LookupError
    bool has_record(const std::string& arch_id) const;
    std::vector<std::string> arch_ids() const;

    void rebuild_index();

private:
    std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
    // Multiplier applied to every ingested latency; the format mandates ms,
    // files recorded in seconds load with scale 1000.
    double latency_unit_scale = 1.0;
};

SpaceSchema load_schema(const std::string& path);
void save_schema(const SpaceSchema& schema, const std::string& path);

// One JSON record per line: arch_id, vec, zcp, latency, accuracy.
BenchmarkDataset load_dataset(const std::string& path, const std::string& schema_path,
                              const LoadOptions& options = {});
void save_dataset(const BenchmarkDataset& dataset, const std::string& path);

// Latent-factor generator: each arch draws u ~ N(0, I_k); device latency is
// softplus(w_h . u + eps_h), proxy score is v_p . u + eps_p, accuracy is
// sigmoid(t . u + eps_a). Monotone transforms preserve rank structure, so
// pairwise device Spearman is controlled by the loadings.
struct SyntheticSpec {
    int n_archs = 1000;
    int n_devices = 4;
    int n_proxies = 8;
    int latent_dim = 6;
    std::vector<std::vector<double>> device_loadings; // n_devices x latent_dim
    std::vector<std::vector<double>> proxy_loadings;  // n_proxies x latent_dim
    std::vector<double> target_blend;                 // latent_dim
    std::vector<double> device_noise;                 // per device, >= 0
    double proxy_noise = 0.1;
    double accuracy_noise = 0.05;
    std::uint64_t seed = 0;
};

void validate_spec(const SyntheticSpec& spec);
BenchmarkDataset generate_synthetic(const SyntheticSpec& spec);

// Expected Spearman between two generated device latency columns, via the
// bivariate-normal rank formula (6/pi) asin(pearson/2).
double analytic_device_spearman(const SyntheticSpec& spec, int device_a, int device_b);

// Builders for the correlation regimes used in tests and experiments. All of
// them give every device a unit-norm loading of the form
// sqrt(p) * shared + sqrt(1-p) * own_axis, so pairwise Pearson is exactly the
// product of the sqrt(p) terms and Spearman follows the asin formula.
SyntheticSpec make_correlated_device_spec(int n_archs, int n_train_devices, int n_proxies,
                                          double train_spearman, double test_spearman,
                                          std::uint64_t seed);
// Train device i correlates with the single test device (last ordinal) at
// test_spearman[i].
SyntheticSpec make_varied_correlation_spec(int n_archs, const std::vector<double>& test_spearman,
                                           int n_proxies, std::uint64_t seed);
// Two spaces sharing proxy semantics; their accuracy targets correlate at
// target_spearman over a common latent draw.
std::pair<SyntheticSpec, SyntheticSpec> make_space_pair_specs(int n_archs, int n_proxies,
                                                              double target_spearman,
                                                              std::uint64_t seed);

// Uniform random disjoint split over arch ids, seed-deterministic.
struct SplitResult {
    std::vector<std::string> train_ids;
    std::vector<std::string> eval_ids;
    bool eval_empty_warning = false;
};

SplitResult make_split(const BenchmarkDataset& dataset, double train_fraction, std::uint64_t seed);
SplitResult make_split_count(const BenchmarkDataset& dataset, std::size_t train_count,
                             std::uint64_t seed);

} // namespace naspred
