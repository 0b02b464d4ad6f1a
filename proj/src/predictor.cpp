#include "naspred/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "naspred/errors.hpp"
#include "naspred/hash.hpp"
#include "naspred/metrics.hpp"

namespace naspred {

using nlohmann::json;

std::string to_string(PredictionTaskKind kind) {
    return kind == PredictionTaskKind::Accuracy ? "accuracy" : "latency";
}

PredictionTaskKind task_kind_from_string(const std::string& name) {
    if (name == "accuracy") return PredictionTaskKind::Accuracy;
    if (name == "latency") return PredictionTaskKind::Latency;
    throw ArgumentError("unknown task kind '" + name + "'");
}

double TargetScaler::scale(double raw) const {
    if (!fitted) throw StateError("target scaler not fitted");
    if (max <= min) return 0.5;
    return (raw - min) / (max - min);
}

double TargetScaler::unscale(double scaled) const {
    if (!fitted) throw StateError("target scaler not fitted");
    if (max <= min) return min;
    return min + scaled * (max - min);
}

TargetScaler fit_target_scaler(const std::vector<double>& targets) {
    if (targets.empty()) throw ArgumentError("fit_target_scaler: empty targets");
    TargetScaler s;
    s.min = *std::min_element(targets.begin(), targets.end());
    s.max = *std::max_element(targets.begin(), targets.end());
    s.fitted = true;
    return s;
}

double resolve_target(const ArchitectureRecord& record, PredictionTaskKind kind,
                      const std::optional<std::string>& device_id) {
    if (kind == PredictionTaskKind::Accuracy) {
        if (!record.accuracy)
            throw DataError("arch '" + record.arch_id + "' has no accuracy");
        return *record.accuracy;
    }
    if (!device_id) throw ArgumentError("latency target needs a device id");
    auto it = record.latency_ms.find(*device_id);
    if (it == record.latency_ms.end())
        throw DataError("arch '" + record.arch_id + "' has no latency for device '" + *device_id +
                        "'");
    return it->second;
}

std::uint64_t hash_config(const TrainConfig& config, const EncodingMode& mode) {
    std::ostringstream os;
    os << config.epochs << '|' << config.lr << '|' << config.weight_decay << '|'
       << config.batch_size << '|' << config.seed << '|' << config.min_lr << '|'
       << config.hidden_width << '|' << config.depth << '|' << config.beta1 << '|' << config.beta2
       << '|' << config.eps << '|' << config.decay_biases << '|' << to_string(mode.kind);
    for (const auto& p : mode.proxy_list) os << '|' << p;
    for (const auto& d : mode.device_list) os << '|' << d;
    return fnv1a64(os.str());
}

namespace {

void check_task(const PredictionTask& task, const BenchmarkDataset& dataset) {
    if (task.train_ids.empty()) throw ArgumentError("task: empty train set");
    std::set<std::string> train(task.train_ids.begin(), task.train_ids.end());
    for (const auto& id : task.eval_ids)
        if (train.count(id))
            throw ArgumentError("task: arch '" + id + "' appears in both train and eval sets");
    for (const auto& id : task.train_ids) dataset.record(id);
    for (const auto& id : task.eval_ids) dataset.record(id);
    if (task.kind == PredictionTaskKind::Latency && !task.device_id)
        throw ArgumentError("latency task needs a device id");
}

DenseMatrix encode_all(const BenchmarkDataset& dataset, const std::vector<std::string>& ids,
                       const EncodingMode& mode, const Normalizer& norm,
                       const EncodeOptions& options) {
    const SpaceSchema* schema = mode.uses_vec() ? &dataset.schema : nullptr;
    DenseMatrix inputs(ids.size(), encoding_dim(mode, schema));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto enc = encode(dataset.record(ids[i]), mode, norm, schema, options);
        std::copy(enc.begin(), enc.end(), inputs.row(i).begin());
    }
    return inputs;
}

std::vector<const ArchitectureRecord*> gather(const BenchmarkDataset& dataset,
                                              const std::vector<std::string>& ids) {
    std::vector<const ArchitectureRecord*> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(&dataset.record(id));
    return out;
}

} // namespace

PredictorModel train_on_pairs(const BenchmarkDataset& dataset,
                              const std::vector<std::string>& arch_ids,
                              const std::vector<double>& targets, PredictionTaskKind kind,
                              const EncodingMode& mode, const TrainConfig& config) {
    if (arch_ids.empty()) throw ArgumentError("train_on_pairs: empty train set");
    if (arch_ids.size() != targets.size())
        throw ArgumentError("train_on_pairs: id/target count mismatch");
    config.validate();

    PredictorModel model;
    model.mode = mode;
    model.schema = dataset.schema;
    model.task_kind = kind;
    model.provenance = {hash_config(config, mode), config.seed};

    std::vector<ArchitectureRecord> train_records;
    train_records.reserve(arch_ids.size());
    for (const auto& id : arch_ids) train_records.push_back(dataset.record(id));
    if (!mode.metric_features().empty()) {
        if (train_records.size() < 2)
            // min-max needs a range; a 1-sample normalizer would be degenerate
            // everywhere, so fit on the full dataset instead.
            model.normalizer = fit_normalizer(dataset.records, mode);
        else
            model.normalizer = fit_normalizer(train_records, mode);
    }
    model.target_scaler = fit_target_scaler(targets);

    DenseMatrix inputs =
        encode_all(dataset, arch_ids, mode, model.normalizer, model.encode_options);
    std::vector<double> scaled(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        scaled[i] = model.target_scaler.scale(targets[i]);

    Rng rng(config.seed);
    model.mlp = init_mlp(config.layer_dims(inputs.cols), rng);
    model.train_losses = fit_mlp(model.mlp, inputs, scaled, config, rng);
    return model;
}

PredictorModel train_scratch(const BenchmarkDataset& dataset, const PredictionTask& task,
                             const EncodingMode& mode, const TrainConfig& config) {
    check_task(task, dataset);
    std::vector<double> targets;
    targets.reserve(task.train_ids.size());
    for (const auto& id : task.train_ids)
        targets.push_back(resolve_target(dataset.record(id), task.kind, task.device_id));
    return train_on_pairs(dataset, task.train_ids, targets, task.kind, mode, config);
}

PredictorModel pretrain_latency_multi_device(const BenchmarkDataset& dataset,
                                             const MultiDevicePretrainSpec& spec,
                                             const EncodingMode& mode, const TrainConfig& config) {
    if (spec.train_devices.empty())
        throw ArgumentError("pretrain: need at least one training device");
    if (spec.arch_pool.empty()) throw ArgumentError("pretrain: empty arch pool");
    config.validate();

    PredictorModel model;
    model.mode = mode;
    model.schema = dataset.schema;
    model.task_kind = PredictionTaskKind::Latency;
    model.provenance = {hash_config(config, mode), config.seed};

    std::vector<ArchitectureRecord> pool_records;
    pool_records.reserve(spec.arch_pool.size());
    for (const auto& id : spec.arch_pool) pool_records.push_back(dataset.record(id));
    if (!mode.metric_features().empty())
        model.normalizer = fit_normalizer(pool_records, mode);

    Rng rng(config.seed);
    // device representation
    DeviceTable table;
    switch (spec.hw_kind) {
    case HwEmbeddingKind::Table:
        table = make_embedding_table(spec.train_devices, spec.embedding_dim, rng);
        break;
    case HwEmbeddingKind::Index:
        table = make_index_table(spec.train_devices, spec.index_width);
        break;
    case HwEmbeddingKind::Sample: {
        auto refs = spec.reference_archs;
        if (refs.empty())
            refs.assign(spec.arch_pool.begin(),
                        spec.arch_pool.begin() +
                            std::min<std::size_t>(10, spec.arch_pool.size()));
        table = make_sample_table(dataset, spec.train_devices, refs);
        break;
    }
    }

    // (arch, device) grid, uniformly subsampled to the pair budget
    const std::size_t grid = spec.arch_pool.size() * spec.train_devices.size();
    std::size_t budget = spec.pair_budget == 0 ? grid : std::min(spec.pair_budget, grid);
    auto picks = rng.sample_indices(grid, budget);
    std::sort(picks.begin(), picks.end()); // deterministic batch layout

    std::vector<std::string> pair_arch;
    std::vector<std::size_t> pair_device;
    std::vector<double> targets;
    pair_arch.reserve(budget);
    pair_device.reserve(budget);
    targets.reserve(budget);
    for (std::size_t p : picks) {
        const auto& arch = spec.arch_pool[p / spec.train_devices.size()];
        std::size_t dev = p % spec.train_devices.size();
        pair_arch.push_back(arch);
        pair_device.push_back(dev);
        targets.push_back(resolve_target(dataset.record(arch), PredictionTaskKind::Latency,
                                         spec.train_devices[dev]));
    }
    model.target_scaler = fit_target_scaler(targets);

    DenseMatrix inputs =
        encode_all(dataset, pair_arch, mode, model.normalizer, model.encode_options);
    std::vector<double> scaled(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        scaled[i] = model.target_scaler.scale(targets[i]);

    model.mlp = init_mlp(config.layer_dims(inputs.cols + table.dim()), rng);
    DeviceRowsBinding binding{&table.rows, &pair_device, table.trainable, {}};
    model.train_losses = fit_mlp(model.mlp, inputs, scaled, config, rng, &binding);
    model.device_table = std::move(table);
    return model;
}

FinetuneDeviceResult finetune_device(const PredictorModel& model, const BenchmarkDataset& dataset,
                                     const std::string& device_id,
                                     const std::vector<std::string>& sample_arch_ids,
                                     const TrainConfig& config) {
    if (!model.device_table) throw StateError("finetune_device: model has no device table");
    if (config.epochs < 0) throw ArgumentError("finetune_device: epochs must be >= 0");

    FinetuneDeviceResult result{model, std::nullopt};
    DeviceTable& table = *result.model.device_table;

    std::vector<double> new_latencies;
    new_latencies.reserve(sample_arch_ids.size());
    for (const auto& id : sample_arch_ids)
        new_latencies.push_back(
            resolve_target(dataset.record(id), PredictionTaskKind::Latency, device_id));

    switch (table.kind) {
    case HwEmbeddingKind::Table: {
        std::map<std::string, std::vector<double>> train_columns;
        for (const auto& device : table.device_ids) {
            std::vector<double> column;
            column.reserve(sample_arch_ids.size());
            for (const auto& id : sample_arch_ids) {
                const auto& rec = dataset.record(id);
                auto it = rec.latency_ms.find(device);
                if (it == rec.latency_ms.end())
                    throw DataError("finetune_device: sample arch '" + id +
                                    "' has no latency for training device '" + device + "'");
                column.push_back(it->second);
            }
            train_columns[device] = std::move(column);
        }
        result.donor =
            init_new_device(table, device_id, sample_arch_ids, new_latencies, train_columns);
        break;
    }
    case HwEmbeddingKind::Index:
        register_index_device(table, device_id);
        break;
    case HwEmbeddingKind::Sample: {
        std::map<std::string, double> lat;
        for (const auto& arch : table.reference_archs) {
            const auto& rec = dataset.record(arch);
            auto it = rec.latency_ms.find(device_id);
            if (it == rec.latency_ms.end())
                throw DataError("finetune_device: reference arch '" + arch +
                                "' has no latency for device '" + device_id + "'");
            lat[arch] = it->second;
        }
        register_sample_device(table, device_id, lat);
        break;
    }
    }

    if (config.epochs == 0) return result;

    DenseMatrix inputs = encode_all(dataset, sample_arch_ids, result.model.mode,
                                    result.model.normalizer, result.model.encode_options);
    std::vector<double> scaled(new_latencies.size());
    for (std::size_t i = 0; i < new_latencies.size(); ++i)
        scaled[i] = result.model.target_scaler.scale(new_latencies[i]);

    std::size_t new_ordinal = table.ordinal_of(device_id);
    std::vector<std::size_t> rows(sample_arch_ids.size(), new_ordinal);
    DeviceRowsBinding binding{&table.rows, &rows, table.trainable, {new_ordinal}};
    Rng rng(config.seed);
    result.model.train_losses = fit_mlp(result.model.mlp, inputs, scaled, config, rng, &binding);
    result.model.provenance = {hash_config(config, result.model.mode), config.seed};
    return result;
}

PredictorModel finetune_space(const PredictorModel& model, const BenchmarkDataset& target_dataset,
                              const PredictionTask& target_task, const TrainConfig& config,
                              const FinetuneSpaceOptions& options) {
    if (!model.mode.space_independent())
        throw TransferError("finetune_space: encoding " + to_string(model.mode.kind) +
                            " is search-space dependent and cannot transfer");
    if (model.device_table)
        throw StateError("finetune_space: cross-space transfer applies to single-target models");
    if (config.epochs < 0) throw ArgumentError("finetune_space: epochs must be >= 0");
    check_task(target_task, target_dataset);

    PredictorModel out = model;
    out.schema = target_dataset.schema;

    std::vector<ArchitectureRecord> train_records;
    train_records.reserve(target_task.train_ids.size());
    for (const auto& id : target_task.train_ids)
        train_records.push_back(target_dataset.record(id));
    if (options.refit_normalizer && train_records.size() >= 2)
        out.normalizer = fit_normalizer(train_records, out.mode);

    std::vector<double> targets;
    targets.reserve(target_task.train_ids.size());
    for (const auto& id : target_task.train_ids)
        targets.push_back(
            resolve_target(target_dataset.record(id), target_task.kind, target_task.device_id));
    out.target_scaler = fit_target_scaler(targets);
    out.task_kind = target_task.kind;

    if (config.epochs == 0) return out;

    DenseMatrix inputs = encode_all(target_dataset, target_task.train_ids, out.mode,
                                    out.normalizer, out.encode_options);
    std::vector<double> scaled(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        scaled[i] = out.target_scaler.scale(targets[i]);

    Rng rng(config.seed);
    out.train_losses = fit_mlp(out.mlp, inputs, scaled, config, rng);
    out.provenance = {hash_config(config, out.mode), config.seed};
    return out;
}

double predict_one(const PredictorModel& model, const ArchitectureRecord& record,
                   const std::optional<std::string>& device_id) {
    if (!model.target_scaler.fitted) throw StateError("predict: model not trained");
    if (model.device_table && !device_id)
        throw ArgumentError("predict: model has a device table; a device id is required");
    if (!model.device_table && device_id)
        throw ArgumentError("predict: model has no device table; no device id applies");
    const SpaceSchema* schema = model.mode.uses_vec() ? &model.schema : nullptr;
    auto enc = encode(record, model.mode, model.normalizer, schema, model.encode_options);
    std::vector<double> row;
    if (model.device_table) row = lookup(*model.device_table, *device_id);
    double scaled = forward_with_row(model.mlp, enc, row);
    return model.target_scaler.unscale(scaled);
}

std::vector<double> predict(const PredictorModel& model,
                            const std::vector<ArchitectureRecord>& records,
                            const std::optional<std::string>& device_id) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) out.push_back(predict_one(model, rec, device_id));
    return out;
}

double evaluate_rho(const PredictorModel& model, const BenchmarkDataset& dataset,
                    const std::vector<std::string>& arch_ids,
                    const std::optional<std::string>& device_id) {
    std::vector<double> preds, truths;
    preds.reserve(arch_ids.size());
    truths.reserve(arch_ids.size());
    for (const auto& id : arch_ids) {
        const auto& rec = dataset.record(id);
        preds.push_back(predict_one(model, rec, device_id));
        truths.push_back(resolve_target(rec, model.task_kind, device_id));
    }
    return spearman_rho(preds, truths);
}

namespace {

json normalizer_to_json(const Normalizer& n) {
    return json{{"features", n.feature_names}, {"min", n.feature_min},
                {"max", n.feature_max},        {"mean", n.feature_mean},
                {"fitted", n.fitted}};
}

Normalizer normalizer_from_json(const json& j) {
    Normalizer n;
    n.feature_names = j.at("features").get<std::vector<std::string>>();
    n.feature_min = j.at("min").get<std::vector<double>>();
    n.feature_max = j.at("max").get<std::vector<double>>();
    n.feature_mean = j.at("mean").get<std::vector<double>>();
    n.fitted = j.at("fitted").get<bool>();
    return n;
}

} // namespace

void save_checkpoint(const PredictorModel& model, const std::string& path) {
    json j;
    j["format"] = "naspred-checkpoint";
    j["version"] = 1;
    j["mode"] = {{"kind", to_string(model.mode.kind)},
                 {"proxies", model.mode.proxy_list},
                 {"devices", model.mode.device_list}};
    j["normalizer"] = normalizer_to_json(model.normalizer);
    j["schema"] = {{"space_id", model.schema.space_id},
                   {"num_nodes", model.schema.num_nodes},
                   {"ops", model.schema.ops},
                   {"vec_length", model.schema.vec_length}};
    json layers = json::array();
    for (const auto& l : model.mlp.layers)
        layers.push_back({{"rows", l.weight.rows},
                          {"cols", l.weight.cols},
                          {"weight", l.weight.data},
                          {"bias", l.bias}});
    j["mlp"] = {{"layers", layers}};
    if (model.device_table) {
        const auto& t = *model.device_table;
        j["device_table"] = {{"kind", to_string(t.kind)},
                             {"device_ids", t.device_ids},
                             {"dim", t.rows.cols},
                             {"rows", t.rows.data},
                             {"trainable", t.trainable},
                             {"reference_archs", t.reference_archs},
                             {"sample_norm", normalizer_to_json(t.sample_norm)},
                             {"index_width", t.index_width}};
    } else {
        j["device_table"] = nullptr;
    }
    j["target_scaler"] = {{"min", model.target_scaler.min},
                          {"max", model.target_scaler.max},
                          {"fitted", model.target_scaler.fitted}};
    j["task_kind"] = to_string(model.task_kind);
    j["provenance"] = {{"config_hash", model.provenance.config_hash},
                       {"seed", model.provenance.seed}};
    j["impute_missing"] = model.encode_options.impute_missing;
    j["train_losses"] = model.train_losses;

    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint '" + path + "'");
    out << j.dump() << "\n";
}

PredictorModel load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("checkpoint '" + path + "': " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "naspred-checkpoint")
            throw ParseError("checkpoint '" + path + "': wrong format tag");
        if (j.at("version").get<int>() != 1)
            throw ParseError("checkpoint '" + path + "': unsupported version");
        PredictorModel model;
        model.mode.kind = encoding_kind_from_string(j["mode"].at("kind").get<std::string>());
        model.mode.proxy_list = j["mode"].at("proxies").get<std::vector<std::string>>();
        model.mode.device_list = j["mode"].at("devices").get<std::vector<std::string>>();
        model.normalizer = normalizer_from_json(j.at("normalizer"));
        model.schema.space_id = j["schema"].at("space_id").get<std::string>();
        model.schema.num_nodes = j["schema"].at("num_nodes").get<int>();
        model.schema.ops = j["schema"].at("ops").get<std::vector<std::string>>();
        model.schema.vec_length = j["schema"].at("vec_length").get<int>();
        for (const auto& lj : j["mlp"].at("layers")) {
            MlpLayer l;
            l.weight.rows = lj.at("rows").get<std::size_t>();
            l.weight.cols = lj.at("cols").get<std::size_t>();
            l.weight.data = lj.at("weight").get<std::vector<double>>();
            l.bias = lj.at("bias").get<std::vector<double>>();
            if (l.weight.data.size() != l.weight.rows * l.weight.cols)
                throw ParseError("checkpoint '" + path + "': weight size mismatch");
            model.mlp.layers.push_back(std::move(l));
        }
        if (!j.at("device_table").is_null()) {
            const auto& tj = j["device_table"];
            DeviceTable t;
            t.kind = hw_embedding_kind_from_string(tj.at("kind").get<std::string>());
            t.device_ids = tj.at("device_ids").get<std::vector<std::string>>();
            t.rows.cols = tj.at("dim").get<std::size_t>();
            t.rows.data = tj.at("rows").get<std::vector<double>>();
            t.rows.rows = t.rows.cols == 0 ? 0 : t.rows.data.size() / t.rows.cols;
            t.trainable = tj.at("trainable").get<bool>();
            t.reference_archs = tj.at("reference_archs").get<std::vector<std::string>>();
            t.sample_norm = normalizer_from_json(tj.at("sample_norm"));
            t.index_width = tj.at("index_width").get<std::size_t>();
            model.device_table = std::move(t);
        }
        model.target_scaler.min = j["target_scaler"].at("min").get<double>();
        model.target_scaler.max = j["target_scaler"].at("max").get<double>();
        model.target_scaler.fitted = j["target_scaler"].at("fitted").get<bool>();
        model.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
        model.provenance.config_hash = j["provenance"].at("config_hash").get<std::uint64_t>();
        model.provenance.seed = j["provenance"].at("seed").get<std::uint64_t>();
        model.encode_options.impute_missing = j.at("impute_missing").get<bool>();
        model.train_losses = j.at("train_losses").get<std::vector<double>>();
        return model;
    } catch (const json::exception& e) {
        throw ParseError("checkpoint '" + path + "': " + e.what());
    }
}

void check_compatible(const PredictorModel& model, const BenchmarkDataset& dataset) {
    if (model.mode.uses_vec() && model.schema.vec_length != dataset.schema.vec_length)
        throw ShapeError("model vec length " + std::to_string(model.schema.vec_length) +
                         " does not match dataset vec length " +
                         std::to_string(dataset.schema.vec_length));
    for (const auto& p : model.mode.proxy_list)
        if (std::find(dataset.proxy_names.begin(), dataset.proxy_names.end(), p) ==
            dataset.proxy_names.end())
            throw DataError("dataset lacks proxy '" + p + "' required by the model");
    for (const auto& d : model.mode.device_list)
        if (std::find(dataset.device_ids.begin(), dataset.device_ids.end(), d) ==
            dataset.device_ids.end())
            throw DataError("dataset lacks device '" + d + "' required by the model");
}

} // namespace naspred
