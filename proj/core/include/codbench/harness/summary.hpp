#pragma once

#include "codbench/harness/registry.hpp"
#include "codbench/harness/statistics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace codbench::harness {

struct SummaryOptions {
    std::string metric = "f_beta_w"; // metric shown in the k-shot layout
    std::string base_cell = "base";  // zero-shot baseline for the improvement column
    std::string full_cell = "full";  // full-data reference for the gap column
};

struct CellSummary {
    CellKey key;
    int runs_ok = 0;
    int runs_failed = 0;
    std::map<std::string, double> means; // metric -> mean over successful runs
};

struct SummaryTable {
    SummaryOptions options;
    std::vector<std::string> methods;  // row order
    std::vector<std::string> cells;    // column order (cell_less)
    std::vector<CellSummary> summaries; // sorted by (method, cell)
    std::vector<std::string> failures;  // one line per failed run

    const CellSummary* find(const std::string& method, const std::string& cell) const;
    std::optional<double> value(const std::string& method, const std::string& cell) const;
    // relative_improvement(cell, base) on the chosen metric; absent for the base cell itself
    std::optional<double> improvement(const std::string& method, const std::string& cell) const;
    // relative_gap(full, cell) on the chosen metric; absent for the full cell itself
    std::optional<double> gap(const std::string& method, const std::string& cell) const;
};

/// Groups run records by (method, cell) and averages every metric over the
/// successful runs. Failed runs are counted and listed but not averaged.
SummaryTable summarize_cells(const std::vector<RunRecord>& records, const SummaryOptions& options = {});

/// Same, from per-cell series of the chosen metric.
SummaryTable summarize_cells(const std::map<CellKey, RunSeries, CellKeyLess>& series,
                             const SummaryOptions& options = {});

/// k-shot layout (methods x cells), improvement and gap tables, a per-cell
/// table of all metrics, and a footer listing failed runs.
std::string render_markdown(const SummaryTable& table);

/// Long format: method,cell,runs,failed,<metrics...>,improvement_vs_base,gap_to_full
std::string render_csv(const SummaryTable& table);

// "Base model", "k=30", "Fully fine-tuned"
std::string cell_title(const std::string& cell);

} // namespace codbench::harness
