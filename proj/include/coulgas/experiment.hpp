#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "coulgas/config_file.hpp"

namespace coulgas {

struct RunOptions {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
    std::string resume_path;  // checkpoint to continue from (sample subcommand)
};

struct RunResult {
    nlohmann::json manifest;
    std::vector<std::string> files;  // paths written (data tables, checkpoints)
    bool ok = true;                  // false only for the verify subcommand on failure
};

// Execute one subcommand pipeline; writes data files into opts.out_dir and
// returns the manifest (also written as <subcommand>_<seed>_<hash>.json).
RunResult run_experiment(const std::string& subcommand, const ConfigFile& cfg,
                         const RunOptions& opts);

}  // namespace coulgas
