#include "codbench/harness/protocol.hpp"

#include "codbench/errors.hpp"
#include "codbench/image_io.hpp"
#include "codbench/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <sys/wait.h>

namespace codbench::harness {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::string expand_hook(const std::string& tmpl, const fs::path& manifest, const fs::path& out_dir, int k, int run) {
    const std::pair<std::string, std::string> subs[] = {
        {"{manifest}", shell_quote(manifest.string())},
        {"{out_dir}", shell_quote(out_dir.string())},
        {"{k}", std::to_string(k)},
        {"{run}", std::to_string(run)},
    };
    std::string out;
    for (std::size_t i = 0; i < tmpl.size();) {
        bool replaced = false;
        for (const auto& [key, value] : subs) {
            if (tmpl.compare(i, key.size(), key) == 0) {
                out += value;
                i += key.size();
                replaced = true;
                break;
            }
        }
        if (!replaced)
            out += tmpl[i++];
    }
    return out;
}

namespace {

RunRecord evaluate_run(const ProtocolConfig& cfg, const std::string& cell, int run, const fs::path& manifest) {
    RunRecord rec;
    rec.method = cfg.method;
    rec.cell = cell;
    rec.run = run;

    const std::string run_name = "k" + std::to_string(cfg.plan.k) + "_run" + std::to_string(run);
    fs::path pred_dir;
    if (cfg.hook_command) {
        pred_dir = cfg.work_dir / "runs" / run_name;
        fs::create_directories(pred_dir);
        const std::string cmd = expand_hook(*cfg.hook_command, manifest, pred_dir, cfg.plan.k, run);
        const int rc = std::system(cmd.c_str());
        const int exit_code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
        if (exit_code != 0) {
            rec.status = RunStatus::failed;
            rec.error = "trainer hook exited with status " + std::to_string(exit_code);
            return rec;
        }
    } else {
        pred_dir = *cfg.predictions_root / run_name;
    }

    try {
        EvalConfig eval = cfg.eval;
        eval.workers = 1;
        const MetricReport report = evaluate_directories(pred_dir, cfg.gt_dir, eval);
        const std::size_t expected = list_images_by_stem(cfg.gt_dir).size();
        if (report.per_image.size() != expected) {
            rec.status = RunStatus::failed;
            rec.error = "missing predictions for " + std::to_string(expected - report.per_image.size()) +
                        " of " + std::to_string(expected) + " test images";
            return rec;
        }
        rec.metrics = {{"mae", report.aggregate.mae},
                       {"s_measure", report.aggregate.s_measure},
                       {"e_phi", report.aggregate.e_phi},
                       {"f_beta_w", report.aggregate.f_beta_w}};
        rec.status = RunStatus::ok;
    } catch (const std::exception& e) {
        rec.status = RunStatus::failed;
        rec.error = e.what();
    }
    return rec;
}

} // namespace

ProtocolResult run_protocol(const ProtocolConfig& cfg, Registry& registry) {
    if (cfg.hook_command.has_value() == cfg.predictions_root.has_value())
        throw InvalidArgument("run_protocol: set exactly one of a trainer hook or a predictions directory");
    if (cfg.method.empty())
        throw InvalidArgument("run_protocol: method name is empty");

    const std::string cell = cfg.cell.value_or(std::to_string(cfg.plan.k));
    const auto samples = draw_samples(cfg.plan);
    const auto manifests = write_sample_manifests(cfg.plan, samples, cfg.work_dir / "samples");

    std::vector<int> pending;
    ProtocolResult result;
    for (int r = 0; r < cfg.plan.runs; ++r) {
        const RunRecord* existing = registry.find(cfg.method, cell, r);
        if (existing && !(cfg.retry_failed && existing->status == RunStatus::failed)) {
            ++result.skipped;
            continue;
        }
        pending.push_back(r);
    }

    std::atomic<int> failed{0};
    parallel_for(pending.size(), cfg.workers, [&](std::size_t i) {
        const int run = pending[i];
        RunRecord rec = evaluate_run(cfg, cell, run, manifests[static_cast<std::size_t>(run)]);
        if (rec.status == RunStatus::failed)
            ++failed;
        registry.append(rec);
    });
    result.executed = static_cast<int>(pending.size());
    result.failed = failed;
    return result;
}

} // namespace codbench::harness
