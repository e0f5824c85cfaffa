#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mhdlab/app/config.hpp"

namespace mhdlab::app {

struct RunOptions {
    std::filesystem::path out = "out";
    int jobs = 1;
    bool verbose = false;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand and writes its artifacts under opts.out. Returns the process exit status:
/// 0 on success, 1 when `suite` has a failing criterion. Module errors propagate as mhdlab::Error.
int run_subcommand(std::string_view name, const RunConfig& cfg, const RunOptions& opts);

}  // namespace mhdlab::app
