#include "naspred/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "naspred/errors.hpp"
#include "naspred/rng.hpp"

namespace naspred {

namespace {

class MlpSearchPredictor final : public SearchPredictor {
public:
    MlpSearchPredictor(EncodingMode mode, TrainConfig config)
        : mode_(std::move(mode)), config_(config) {}

    double train(const BenchmarkDataset& dataset, const std::vector<std::string>& ids,
                 const std::vector<double>& targets) override {
        model_ = train_on_pairs(dataset, ids, targets, PredictionTaskKind::Accuracy, mode_,
                                config_);
        return model_->train_losses.empty() ? 0.0 : model_->train_losses.back();
    }

    std::vector<double> score(const BenchmarkDataset& dataset,
                              const std::vector<std::string>& ids) override {
        if (!model_) throw StateError("search predictor not trained");
        std::vector<double> out;
        out.reserve(ids.size());
        for (const auto& id : ids) out.push_back(predict_one(*model_, dataset.record(id)));
        return out;
    }

private:
    EncodingMode mode_;
    TrainConfig config_;
    std::optional<PredictorModel> model_;
};

} // namespace

PredictorFactory make_mlp_predictor_factory(EncodingMode mode, TrainConfig config) {
    return [mode = std::move(mode), config]() {
        return std::make_unique<MlpSearchPredictor>(mode, config);
    };
}

SearchState make_search_state(const BenchmarkDataset& dataset, std::uint64_t seed) {
    SearchState state;
    state.pool = dataset.arch_ids();
    state.seed = seed;
    return state;
}

namespace {

void append_samples(SearchState& state, const BenchmarkDataset& dataset, PredictionTaskKind kind,
                    const std::vector<std::string>& picks, double train_loss) {
    for (const auto& id : picks) {
        double target = resolve_target(dataset.record(id), kind, std::nullopt);
        state.sampled.emplace_back(id, target);
        if (state.sampled.size() == 1 || target > state.best_so_far.second)
            state.best_so_far = {id, target};
    }
    state.round += 1;
    state.history.push_back(
        {state.round, state.sampled.size(), state.best_so_far.second, train_loss});
}

} // namespace

bool search_step(SearchState& state, const PredictorFactory& factory,
                 const BenchmarkDataset& dataset, PredictionTaskKind kind, int batch) {
    if (batch < 1) throw ArgumentError("search_step: batch must be >= 1");
    std::set<std::string> sampled_ids;
    for (const auto& [id, t] : state.sampled) sampled_ids.insert(id);
    std::vector<std::string> remaining;
    remaining.reserve(state.pool.size());
    for (const auto& id : state.pool)
        if (!sampled_ids.count(id)) remaining.push_back(id);
    if (remaining.empty()) {
        state.done = true;
        return false;
    }
    std::size_t take = std::min<std::size_t>(batch, remaining.size());

    std::vector<std::string> picks;
    double train_loss = std::numeric_limits<double>::quiet_NaN();
    if (state.sampled.empty()) {
        // bootstrap: uniform random, seeded; later rounds re-derive their rng
        // from (seed, round) so a reloaded state continues identically
        Rng rng(state.seed ^ (0x51ed2701ull + static_cast<std::uint64_t>(state.round)));
        auto idx = rng.sample_indices(remaining.size(), take);
        std::sort(idx.begin(), idx.end());
        for (std::size_t i : idx) picks.push_back(remaining[i]);
    } else {
        std::vector<std::string> ids;
        std::vector<double> targets;
        ids.reserve(state.sampled.size());
        targets.reserve(state.sampled.size());
        for (const auto& [id, t] : state.sampled) {
            ids.push_back(id);
            targets.push_back(t);
        }
        auto predictor = factory();
        train_loss = predictor->train(dataset, ids, targets);
        auto scores = predictor->score(dataset, remaining);
        // top-`take` by predicted target, ties by arch id order
        std::vector<std::size_t> order(remaining.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return remaining[a] < remaining[b];
        });
        for (std::size_t i = 0; i < take; ++i) picks.push_back(remaining[order[i]]);
    }
    append_samples(state, dataset, kind, picks, train_loss);
    if (state.sampled.size() == state.pool.size()) state.done = true;
    return true;
}

SearchState run_search(const BenchmarkDataset& dataset, const SearchConfig& config,
                       std::size_t budget) {
    if (budget < static_cast<std::size_t>(config.batch))
        throw ArgumentError("run_search: budget must be >= batch");
    SearchState state = make_search_state(dataset, config.seed);
    auto factory = make_mlp_predictor_factory(config.mode, config.predictor_config);
    std::size_t cap = std::min(budget, state.pool.size());
    while (state.sampled.size() < cap) {
        int take = static_cast<int>(
            std::min<std::size_t>(config.batch, cap - state.sampled.size()));
        if (!search_step(state, factory, dataset, config.kind, take)) break;
    }
    return state;
}

std::string search_trace_csv(const SearchState& state) {
    std::string out = "round,samples_used,best_target,predictor_train_loss\n";
    char buf[128];
    for (const auto& r : state.history) {
        std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g\n", r.round, r.samples_used,
                      r.best_target, r.predictor_train_loss);
        out += buf;
    }
    return out;
}

} // namespace naspred
