#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace naspred::cli {

// Flag-level overrides; flags win over config file values.
struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<int> workers;
    std::optional<std::string> log_level;
    bool plot = false;
};

// Each command loads + validates its config, runs the experiment grid, and
// writes CSV outputs (atomically) under out_dir. Returns a process exit code:
// 0 on success, 2 on configuration errors, 1 on runtime failures.
int cmd_train(const std::string& config_path, const Overrides& overrides = {});
int cmd_transfer_device(const std::string& config_path, const Overrides& overrides = {});
int cmd_transfer_space(const std::string& config_path, const Overrides& overrides = {});
int cmd_search(const std::string& config_path, const Overrides& overrides = {});
int cmd_gen_synthetic(const std::string& config_path, const Overrides& overrides = {});
int cmd_eval(const std::string& config_path, const Overrides& overrides = {});

// Resolves a path against NASPRED_DATA_ROOT when it does not exist as given.
std::string resolve_data_path(const std::string& path);

} // namespace naspred::cli
