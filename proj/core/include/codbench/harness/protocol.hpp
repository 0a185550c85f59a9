#pragma once

#include "codbench/evaluation.hpp"
#include "codbench/harness/registry.hpp"
#include "codbench/harness/sampling.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace codbench::harness {

/// One k-shot cell of the protocol: sample, train (externally), evaluate, record.
///
/// Exactly one of `hook_command` and `predictions_root` must be set:
///  - hook mode runs the shell command with {manifest}, {out_dir}, {k} and
///    {run} substituted; the command must write one PNG per test image into
///    out_dir (<work_dir>/runs/k{K}_run{R}/);
///  - precomputed mode reads <predictions_root>/k{K}_run{R}/.
struct ProtocolConfig {
    std::string method;
    SamplePlan plan;
    std::optional<std::string> cell; // registry "k" label; defaults to plan.k
    std::filesystem::path gt_dir;
    std::filesystem::path work_dir;
    std::optional<std::string> hook_command;
    std::optional<std::filesystem::path> predictions_root;
    EvalConfig eval;
    unsigned workers = 1;      // runs evaluated concurrently
    bool retry_failed = false; // re-execute runs recorded as failed
};

struct ProtocolResult {
    int executed = 0;
    int skipped = 0; // already in the registry
    int failed = 0;
};

/// Substitutes {manifest}, {out_dir}, {k} and {run}; paths are single-quoted
/// for the shell.
std::string expand_hook(const std::string& command_template, const std::filesystem::path& manifest,
                        const std::filesystem::path& out_dir, int k, int run);

std::string shell_quote(const std::string& text);

/// Runs every run of the plan that the registry does not already hold and
/// appends one record per run. A failing hook or missing predictions mark the
/// run failed; the sweep continues.
ProtocolResult run_protocol(const ProtocolConfig& config, Registry& registry);

} // namespace codbench::harness
