#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "naspred/dataio.hpp"
#include "naspred/predictor.hpp"

namespace naspred {

// Per-round record: samples_used counts every queried architecture so far.
struct SearchRound {
    int round = 0;
    std::size_t samples_used = 0;
    double best_target = 0.0;
    double predictor_train_loss = 0.0; // NaN on the bootstrap round
};

struct SearchState {
    std::vector<std::string> pool; // candidate arch ids
    std::vector<std::pair<std::string, double>> sampled;
    int round = 0;
    std::pair<std::string, double> best_so_far{"", 0.0};
    std::vector<SearchRound> history;
    std::uint64_t seed = 0;
    bool done = false;
};

// Fresh surrogate per round: train on everything sampled, score candidates.
class SearchPredictor {
public:
    virtual ~SearchPredictor() = default;
    // Returns the final training loss.
    virtual double train(const BenchmarkDataset& dataset, const std::vector<std::string>& ids,
                         const std::vector<double>& targets) = 0;
    virtual std::vector<double> score(const BenchmarkDataset& dataset,
                                      const std::vector<std::string>& ids) = 0;
};

using PredictorFactory = std::function<std::unique_ptr<SearchPredictor>()>;

// MLP surrogate over the given encoding.
PredictorFactory make_mlp_predictor_factory(EncodingMode mode, TrainConfig config);

SearchState make_search_state(const BenchmarkDataset& dataset, std::uint64_t seed);

// One acquisition round: the first round draws uniformly at random
// (seed-deterministic); later rounds train a fresh predictor on all sampled
// pairs, score the unsampled pool, and take the top `batch` predicted targets
// (ties broken by arch id). True targets come from the dataset. Returns false
// once the pool is exhausted.
bool search_step(SearchState& state, const PredictorFactory& factory,
                 const BenchmarkDataset& dataset, PredictionTaskKind kind, int batch = 10);

struct SearchConfig {
    EncodingMode mode;
    TrainConfig predictor_config;
    PredictionTaskKind kind = PredictionTaskKind::Accuracy;
    int batch = 10;
    std::uint64_t seed = 0;
};

// Repeats search_step until `budget` architectures have been sampled (or the
// pool runs dry). budget must be >= batch.
SearchState run_search(const BenchmarkDataset& dataset, const SearchConfig& config,
                       std::size_t budget);

// round,samples_used,best_target,predictor_train_loss rows.
std::string search_trace_csv(const SearchState& state);

} // namespace naspred
