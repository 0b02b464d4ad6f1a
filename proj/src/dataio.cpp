#include "naspred/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "naspred/errors.hpp"
#include "naspred/rng.hpp"

namespace naspred {

using nlohmann::json;

const ArchitectureRecord& BenchmarkDataset::record(const std::string& arch_id) const {
    auto it = index_.find(arch_id);
    if (it == index_.end())
        throw LookupError("dataset '" + space_id + "' has no arch '" + arch_id + "'");
    return records[it->second];
}

bool BenchmarkDataset::has_record(const std::string& arch_id) const {
    return index_.count(arch_id) != 0;
}

std::vector<std::string> BenchmarkDataset::arch_ids() const {
    std::vector<std::string> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.arch_id);
    return ids;
}

void BenchmarkDataset::rebuild_index() {
    index_.clear();
    index_.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto [it, inserted] = index_.emplace(records[i].arch_id, i);
        if (!inserted)
            throw IntegrityError("duplicate arch_id '" + records[i].arch_id + "'");
    }
}

namespace {

// Union metadata + partial-record diagnostics.
void finalize_dataset(BenchmarkDataset& ds) {
    std::set<std::string> devices, proxies;
    for (const auto& r : ds.records) {
        for (const auto& [k, v] : r.latency_ms) devices.insert(k);
        for (const auto& [k, v] : r.zcp) proxies.insert(k);
    }
    ds.device_ids.assign(devices.begin(), devices.end());
    ds.proxy_names.assign(proxies.begin(), proxies.end());
    ds.partial_records.clear();
    for (const auto& r : ds.records) {
        bool partial = r.latency_ms.size() != devices.size() || r.zcp.size() != proxies.size();
        if (partial) ds.partial_records.push_back(r.arch_id);
    }
    ds.rebuild_index();
}

} // namespace

SpaceSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schema file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("schema '" + path + "': " + e.what());
    }
    SpaceSchema schema;
    try {
        schema.space_id = j.at("space_id").get<std::string>();
        schema.num_nodes = j.at("num_nodes").get<int>();
        schema.ops = j.at("ops").get<std::vector<std::string>>();
        schema.vec_length = j.at("vec_length").get<int>();
    } catch (const json::exception& e) {
        throw ParseError("schema '" + path + "': " + e.what());
    }
    validate_schema(schema);
    return schema;
}

void save_schema(const SpaceSchema& schema, const std::string& path) {
    json j{{"space_id", schema.space_id},
           {"num_nodes", schema.num_nodes},
           {"ops", schema.ops},
           {"vec_length", schema.vec_length}};
    std::ofstream out(path);
    if (!out) throw Error("cannot write schema file '" + path + "'");
    out << j.dump(2) << "\n";
}

BenchmarkDataset load_dataset(const std::string& path, const std::string& schema_path,
                              const LoadOptions& options) {
    BenchmarkDataset ds;
    ds.schema = load_schema(schema_path);
    ds.space_id = ds.schema.space_id;

    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("dataset '" + path + "' line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        ArchitectureRecord rec;
        try {
            rec.arch_id = j.at("arch_id").get<std::string>();
            rec.space_id = ds.space_id;
            if (j.contains("space_id") && j["space_id"].get<std::string>() != ds.space_id)
                throw IntegrityError("dataset line " + std::to_string(line_no) +
                                     ": space_id does not match schema");
            if (j.contains("vec")) rec.vec = j["vec"].get<std::vector<int>>();
            if (j.contains("zcp"))
                rec.zcp = j["zcp"].get<std::map<std::string, double>>();
            if (j.contains("latency")) {
                rec.latency_ms = j["latency"].get<std::map<std::string, double>>();
                for (auto& [k, v] : rec.latency_ms) v *= options.latency_unit_scale;
            }
            if (j.contains("accuracy")) rec.accuracy = j["accuracy"].get<double>();
        } catch (const IntegrityError&) {
            throw;
        } catch (const json::exception& e) {
            throw ParseError("dataset '" + path + "' line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        if (!seen.insert(rec.arch_id).second)
            throw IntegrityError("dataset '" + path + "' line " + std::to_string(line_no) +
                                 ": duplicate arch_id '" + rec.arch_id + "'");
        for (const auto& [dev, ms] : rec.latency_ms)
            if (!(ms > 0.0))
                throw DataError("dataset '" + path + "' line " + std::to_string(line_no) +
                                ": non-positive latency for device '" + dev + "'");
        validate_vec(rec, ds.schema);
        ds.records.push_back(std::move(rec));
    }
    finalize_dataset(ds);
    return ds;
}

void save_dataset(const BenchmarkDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset file '" + path + "'");
    for (const auto& r : dataset.records) {
        json j;
        j["arch_id"] = r.arch_id;
        if (r.vec) j["vec"] = *r.vec;
        if (!r.zcp.empty()) j["zcp"] = r.zcp;
        if (!r.latency_ms.empty()) j["latency"] = r.latency_ms;
        if (r.accuracy) j["accuracy"] = *r.accuracy;
        out << j.dump() << "\n";
    }
}

void validate_spec(const SyntheticSpec& spec) {
    if (spec.n_archs < 1 || spec.n_devices < 0 || spec.n_proxies < 0 || spec.latent_dim < 1)
        throw ArgumentError("synthetic spec: counts must be positive");
    auto check_loadings = [&](const std::vector<std::vector<double>>& loadings, int count,
                              const char* what) {
        if (static_cast<int>(loadings.size()) != count)
            throw ArgumentError(std::string("synthetic spec: ") + what + " loading count mismatch");
        for (const auto& row : loadings) {
            if (static_cast<int>(row.size()) != spec.latent_dim)
                throw ArgumentError(std::string("synthetic spec: ") + what +
                                    " loading dim mismatch");
            double norm = 0.0;
            for (double v : row) {
                if (!std::isfinite(v))
                    throw ArgumentError(std::string("synthetic spec: ") + what +
                                        " loading not finite");
                norm += v * v;
            }
            if (norm == 0.0)
                throw ArgumentError(std::string("synthetic spec: degenerate all-zero ") + what +
                                    " loading");
        }
    };
    check_loadings(spec.device_loadings, spec.n_devices, "device");
    check_loadings(spec.proxy_loadings, spec.n_proxies, "proxy");
    if (static_cast<int>(spec.target_blend.size()) != spec.latent_dim)
        throw ArgumentError("synthetic spec: target blend dim mismatch");
    if (static_cast<int>(spec.device_noise.size()) != spec.n_devices)
        throw ArgumentError("synthetic spec: device noise count mismatch");
    for (double s : spec.device_noise)
        if (s < 0.0) throw ArgumentError("synthetic spec: noise scales must be >= 0");
    if (spec.proxy_noise < 0.0 || spec.accuracy_noise < 0.0)
        throw ArgumentError("synthetic spec: noise scales must be >= 0");
}

namespace {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

std::string zero_padded(int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*d", width, value);
    return buf;
}

// Synthetic Vec layout: 4 nodes -> 6 adjacency bits, then 5 op slots.
SpaceSchema synthetic_schema(const std::string& space_id) {
    SpaceSchema schema;
    schema.space_id = space_id;
    schema.num_nodes = 4;
    schema.ops = {"none", "skip", "conv1x1", "conv3x3", "avgpool"};
    schema.vec_length = schema.adjacency_bits() + 5;
    return schema;
}

} // namespace

BenchmarkDataset generate_synthetic(const SyntheticSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);
    BenchmarkDataset ds;
    ds.space_id = "synthetic_" + std::to_string(spec.seed);
    ds.schema = synthetic_schema(ds.space_id);

    std::vector<std::string> device_names;
    for (int d = 0; d < spec.n_devices; ++d) device_names.push_back("dev_" + zero_padded(d, 2));
    std::vector<std::string> proxy_names;
    for (int p = 0; p < spec.n_proxies; ++p)
        proxy_names.push_back(p < static_cast<int>(kDefaultZcpProxies.size())
                                  ? kDefaultZcpProxies[p]
                                  : "zcp_" + zero_padded(p, 2));

    int id_width = 1;
    for (int n = spec.n_archs - 1; n >= 10; n /= 10) ++id_width;
    ds.records.reserve(spec.n_archs);
    std::vector<double> u(spec.latent_dim);
    for (int a = 0; a < spec.n_archs; ++a) {
        for (double& v : u) v = rng.normal();
        ArchitectureRecord rec;
        rec.arch_id = "arch_" + zero_padded(a, id_width);
        rec.space_id = ds.space_id;

        std::vector<int> vec(ds.schema.vec_length, 0);
        for (int i = 0; i < ds.schema.adjacency_bits(); ++i)
            vec[i] = rng.uniform() < 0.5 ? 0 : 1;
        for (int i = ds.schema.adjacency_bits(); i < ds.schema.vec_length; ++i)
            vec[i] = static_cast<int>(rng.uniform_index(ds.schema.ops.size()));
        rec.vec = std::move(vec);

        for (int d = 0; d < spec.n_devices; ++d) {
            double z = dot(spec.device_loadings[d], u) + spec.device_noise[d] * rng.normal();
            rec.latency_ms[device_names[d]] = softplus(z);
        }
        for (int p = 0; p < spec.n_proxies; ++p) {
            double z = dot(spec.proxy_loadings[p], u) + spec.proxy_noise * rng.normal();
            rec.zcp[proxy_names[p]] = z;
        }
        double t = dot(spec.target_blend, u) + spec.accuracy_noise * rng.normal();
        rec.accuracy = 1.0 / (1.0 + std::exp(-t));
        ds.records.push_back(std::move(rec));
    }
    ds.device_ids = device_names;
    ds.proxy_names = proxy_names;
    std::sort(ds.proxy_names.begin(), ds.proxy_names.end());
    ds.rebuild_index();
    return ds;
}

double analytic_device_spearman(const SyntheticSpec& spec, int device_a, int device_b) {
    if (device_a < 0 || device_b < 0 || device_a >= spec.n_devices || device_b >= spec.n_devices)
        throw ArgumentError("analytic_device_spearman: device ordinal out of range");
    if (device_a == device_b) return 1.0;
    const auto& wa = spec.device_loadings[device_a];
    const auto& wb = spec.device_loadings[device_b];
    double va = dot(wa, wa) + spec.device_noise[device_a] * spec.device_noise[device_a];
    double vb = dot(wb, wb) + spec.device_noise[device_b] * spec.device_noise[device_b];
    double pearson = dot(wa, wb) / std::sqrt(va * vb);
    return 6.0 / 3.14159265358979323846 * std::asin(pearson / 2.0);
}

namespace {

// Pearson level that realizes a requested Spearman under bivariate normality.
double pearson_for_spearman(double spearman) {
    return 2.0 * std::sin(3.14159265358979323846 * spearman / 6.0);
}

// Proxies load on the shared axis 0 with per-proxy strength so an encoder can
// recover the shared factor; strengths vary deterministically with the seed.
std::vector<std::vector<double>> shared_axis_proxies(int n_proxies, int latent_dim,
                                                     std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::vector<double>> loadings(n_proxies, std::vector<double>(latent_dim, 0.0));
    for (int p = 0; p < n_proxies; ++p) loadings[p][0] = rng.uniform(0.6, 1.0);
    return loadings;
}

} // namespace

SyntheticSpec make_correlated_device_spec(int n_archs, int n_train_devices, int n_proxies,
                                          double train_spearman, double test_spearman,
                                          std::uint64_t seed) {
    if (n_train_devices < 1) throw ArgumentError("need at least one training device");
    SyntheticSpec spec;
    spec.n_archs = n_archs;
    spec.n_devices = n_train_devices + 1; // test device is the last ordinal
    spec.n_proxies = n_proxies;
    spec.latent_dim = spec.n_devices + 1;
    spec.seed = seed;

    double p_train = pearson_for_spearman(train_spearman);
    double p_tt = pearson_for_spearman(test_spearman);
    // train-test pearson = sqrt(p_train * p_test); solve for the test share
    double p_test = std::min(1.0, p_tt * p_tt / p_train);

    spec.device_loadings.assign(spec.n_devices, std::vector<double>(spec.latent_dim, 0.0));
    for (int d = 0; d < n_train_devices; ++d) {
        spec.device_loadings[d][0] = std::sqrt(p_train);
        spec.device_loadings[d][1 + d] = std::sqrt(1.0 - p_train);
    }
    spec.device_loadings[n_train_devices][0] = std::sqrt(p_test);
    spec.device_loadings[n_train_devices][spec.latent_dim - 1] = std::sqrt(1.0 - p_test);

    spec.proxy_loadings = shared_axis_proxies(n_proxies, spec.latent_dim, seed);
    spec.proxy_noise = 0.15;
    spec.target_blend.assign(spec.latent_dim, 0.0);
    spec.target_blend[0] = 1.2;
    spec.device_noise.assign(spec.n_devices, 0.0);
    spec.accuracy_noise = 0.05;
    return spec;
}

SyntheticSpec make_varied_correlation_spec(int n_archs, const std::vector<double>& test_spearman,
                                           int n_proxies, std::uint64_t seed) {
    if (test_spearman.empty()) throw ArgumentError("need at least one training device");
    int n_train = static_cast<int>(test_spearman.size());
    SyntheticSpec spec;
    spec.n_archs = n_archs;
    spec.n_devices = n_train + 1;
    spec.n_proxies = n_proxies;
    spec.latent_dim = spec.n_devices + 1;
    spec.seed = seed;

    spec.device_loadings.assign(spec.n_devices, std::vector<double>(spec.latent_dim, 0.0));
    for (int d = 0; d < n_train; ++d) {
        // test device == shared axis, so pearson(train_d, test) = sqrt(p_d)
        double pearson = pearson_for_spearman(test_spearman[d]);
        double p = pearson * pearson;
        spec.device_loadings[d][0] = std::sqrt(p);
        spec.device_loadings[d][1 + d] = std::sqrt(1.0 - p);
    }
    spec.device_loadings[n_train][0] = 1.0;

    spec.proxy_loadings = shared_axis_proxies(n_proxies, spec.latent_dim, seed);
    spec.proxy_noise = 0.15;
    spec.target_blend.assign(spec.latent_dim, 0.0);
    spec.target_blend[0] = 1.2;
    spec.device_noise.assign(spec.n_devices, 0.0);
    spec.accuracy_noise = 0.05;
    return spec;
}

std::pair<SyntheticSpec, SyntheticSpec> make_space_pair_specs(int n_archs, int n_proxies,
                                                              double target_spearman,
                                                              std::uint64_t seed) {
    SyntheticSpec base;
    base.n_archs = n_archs;
    base.n_devices = 2;
    base.n_proxies = n_proxies;
    base.latent_dim = 5;
    base.seed = seed;
    base.device_loadings = {{0.9, 0.3, 0.0, 0.0, 0.0}, {0.8, 0.0, 0.4, 0.0, 0.0}};
    base.device_noise = {0.05, 0.05};
    base.proxy_loadings = shared_axis_proxies(n_proxies, base.latent_dim, seed);
    base.proxy_noise = 0.15;
    base.accuracy_noise = 0.05;
    base.target_blend.assign(base.latent_dim, 0.0);
    base.target_blend[0] = 1.2;

    SyntheticSpec other = base;
    other.seed = seed ^ 0xabcdef1234567890ull;
    // rotate the target into latent axis 3 (which no proxy sees via axis 0)
    double pearson = pearson_for_spearman(target_spearman);
    other.target_blend.assign(base.latent_dim, 0.0);
    other.target_blend[0] = 1.2 * pearson;
    other.target_blend[3] = 1.2 * std::sqrt(1.0 - pearson * pearson);
    return {base, other};
}

namespace {

SplitResult split_impl(const BenchmarkDataset& dataset, std::size_t train_count,
                       std::uint64_t seed) {
    if (train_count > dataset.records.size())
        throw ArgumentError("make_split: requested " + std::to_string(train_count) +
                            " train ids from " + std::to_string(dataset.records.size()) +
                            " records");
    auto ids = dataset.arch_ids();
    Rng rng(seed);
    rng.shuffle(ids);
    SplitResult result;
    result.train_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_count));
    result.eval_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(train_count), ids.end());
    result.eval_empty_warning = result.eval_ids.empty();
    return result;
}

} // namespace

SplitResult make_split(const BenchmarkDataset& dataset, double train_fraction,
                       std::uint64_t seed) {
    if (train_fraction < 0.0 || train_fraction > 1.0)
        throw ArgumentError("make_split: fraction must be in [0, 1]");
    auto count = static_cast<std::size_t>(train_fraction *
                                          static_cast<double>(dataset.records.size()));
    return split_impl(dataset, count, seed);
}

SplitResult make_split_count(const BenchmarkDataset& dataset, std::size_t train_count,
                             std::uint64_t seed) {
    return split_impl(dataset, train_count, seed);
}

} // namespace naspred
