#include "codbench/harness/summary.hpp"

#include "codbench/file_util.hpp"
#include "codbench/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace codbench::harness {

namespace {

const std::vector<std::string>& known_metric_order() {
    static const std::vector<std::string> order{"mae", "s_measure", "e_phi", "f_beta_w", "fg_ratio"};
    return order;
}

std::vector<std::string> metric_columns(const SummaryTable& table) {
    std::set<std::string> names;
    for (const auto& s : table.summaries)
        for (const auto& [name, value] : s.means)
            names.insert(name);
    std::vector<std::string> out;
    for (const auto& known : known_metric_order())
        if (names.erase(known))
            out.push_back(known);
    out.insert(out.end(), names.begin(), names.end());
    return out;
}

std::string metric_title(const std::string& name) {
    if (name == "mae")
        return "MAE";
    if (name == "s_measure")
        return "S";
    if (name == "e_phi")
        return "Eφ";
    if (name == "f_beta_w")
        return "Fβw";
    if (name == "fg_ratio")
        return "fg ratio";
    return name;
}

std::string percent(double x) {
    return (x > 0 ? "+" : "") + format_fixed(100.0 * x, 1) + "%";
}

constexpr const char* kMissing = "—";

void finalize(SummaryTable& t) {
    std::set<std::string> methods;
    std::vector<std::string> cells;
    for (const auto& s : t.summaries) {
        methods.insert(s.key.method);
        if (std::find(cells.begin(), cells.end(), s.key.cell) == cells.end())
            cells.push_back(s.key.cell);
    }
    std::sort(cells.begin(), cells.end(), cell_less);
    t.methods.assign(methods.begin(), methods.end());
    t.cells = std::move(cells);
    std::sort(t.summaries.begin(), t.summaries.end(),
              [](const CellSummary& a, const CellSummary& b) { return CellKeyLess{}(a.key, b.key); });
}

} // namespace

std::string cell_title(const std::string& cell) {
    if (cell == "base")
        return "Base model";
    if (cell == "full")
        return "Fully fine-tuned";
    if (!cell.empty() && std::all_of(cell.begin(), cell.end(), [](unsigned char c) { return std::isdigit(c); }))
        return "k=" + cell;
    return cell;
}

const CellSummary* SummaryTable::find(const std::string& method, const std::string& cell) const {
    for (const auto& s : summaries)
        if (s.key.method == method && s.key.cell == cell)
            return &s;
    return nullptr;
}

std::optional<double> SummaryTable::value(const std::string& method, const std::string& cell) const {
    const CellSummary* s = find(method, cell);
    if (!s)
        return std::nullopt;
    auto it = s->means.find(options.metric);
    if (it == s->means.end())
        return std::nullopt;
    return it->second;
}

std::optional<double> SummaryTable::improvement(const std::string& method, const std::string& cell) const {
    if (cell == options.base_cell)
        return std::nullopt;
    auto base = value(method, options.base_cell);
    auto v = value(method, cell);
    if (!base || !v || *base == 0.0)
        return std::nullopt;
    return relative_improvement(*v, *base);
}

std::optional<double> SummaryTable::gap(const std::string& method, const std::string& cell) const {
    if (cell == options.full_cell)
        return std::nullopt;
    auto full = value(method, options.full_cell);
    auto v = value(method, cell);
    if (!full || !v || *full == 0.0)
        return std::nullopt;
    return relative_gap(*full, *v);
}

SummaryTable summarize_cells(const std::vector<RunRecord>& records, const SummaryOptions& options) {
    std::map<CellKey, std::vector<const RunRecord*>, CellKeyLess> groups;
    for (const auto& r : records)
        groups[CellKey{r.method, r.cell}].push_back(&r);

    SummaryTable t;
    t.options = options;
    for (auto& [key, runs] : groups) {
        std::sort(runs.begin(), runs.end(), [](const RunRecord* a, const RunRecord* b) { return a->run < b->run; });
        CellSummary s;
        s.key = key;
        std::map<std::string, std::pair<double, int>> sums;
        for (const RunRecord* r : runs) {
            if (r->status == RunStatus::failed) {
                ++s.runs_failed;
                t.failures.push_back(key.method + " " + cell_title(key.cell) + " run " + std::to_string(r->run) +
                                     (r->error.empty() ? "" : ": " + r->error));
                continue;
            }
            ++s.runs_ok;
            for (const auto& [name, value] : r->metrics) {
                sums[name].first += value;
                sums[name].second += 1;
            }
        }
        for (const auto& [name, acc] : sums)
            s.means[name] = acc.first / acc.second;
        t.summaries.push_back(std::move(s));
    }
    finalize(t);
    return t;
}

SummaryTable summarize_cells(const std::map<CellKey, RunSeries, CellKeyLess>& series, const SummaryOptions& options) {
    SummaryTable t;
    t.options = options;
    for (const auto& [key, s] : series) {
        CellSummary c;
        c.key = key;
        c.runs_ok = static_cast<int>(s.values.size());
        if (!s.values.empty()) {
            double sum = 0.0;
            for (double v : s.values)
                sum += v;
            c.means[options.metric] = sum / static_cast<double>(s.values.size());
        }
        t.summaries.push_back(std::move(c));
    }
    finalize(t);
    return t;
}

std::string render_markdown(const SummaryTable& t) {
    std::ostringstream out;
    const std::string& metric = t.options.metric;
    out << "# k-shot summary\n\n";
    out << "- metric: " << metric << "\n";
    out << "- baseline cell: " << t.options.base_cell << "\n";
    out << "- reference cell: " << t.options.full_cell << "\n";
    out << "- aggregation: mean over successful runs\n\n";

    auto header = [&](const std::vector<std::string>& cells) {
        out << "| Method |";
        for (const auto& c : cells)
            out << ' ' << cell_title(c) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << "---|";
        out << '\n';
    };

    out << "## " << metric_title(metric) << " per cell\n\n";
    header(t.cells);
    for (const auto& m : t.methods) {
        out << "| " << m << " |";
        for (const auto& c : t.cells) {
            auto v = t.value(m, c);
            out << ' ' << (v ? format_fixed(*v, 3) : kMissing) << " |";
        }
        out << '\n';
    }

    out << "\n## Relative improvement over " << cell_title(t.options.base_cell) << "\n\n";
    header(t.cells);
    for (const auto& m : t.methods) {
        out << "| " << m << " |";
        for (const auto& c : t.cells) {
            auto v = t.improvement(m, c);
            out << ' ' << (v ? percent(*v) : kMissing) << " |";
        }
        out << '\n';
    }

    out << "\n## Relative gap to " << cell_title(t.options.full_cell) << "\n\n";
    header(t.cells);
    for (const auto& m : t.methods) {
        out << "| " << m << " |";
        for (const auto& c : t.cells) {
            auto v = t.gap(m, c);
            out << ' ' << (v ? percent(*v) : kMissing) << " |";
        }
        out << '\n';
    }

    const auto metrics = metric_columns(t);
    out << "\n## All metrics\n\n| Method | Cell | Runs | Failed |";
    for (const auto& name : metrics)
        out << ' ' << metric_title(name) << " |";
    out << "\n|---|---|---|---|";
    for (std::size_t i = 0; i < metrics.size(); ++i)
        out << "---|";
    out << '\n';
    for (const auto& s : t.summaries) {
        out << "| " << s.key.method << " | " << cell_title(s.key.cell) << " | " << s.runs_ok << " | " << s.runs_failed
            << " |";
        for (const auto& name : metrics) {
            auto it = s.means.find(name);
            out << ' ' << (it == s.means.end() ? kMissing : format_fixed(it->second, 3)) << " |";
        }
        out << '\n';
    }

    out << '\n';
    if (t.failures.empty()) {
        out << "Failed runs: none\n";
    } else {
        out << "Failed runs (excluded from the means): " << t.failures.size() << "\n\n";
        for (const auto& f : t.failures)
            out << "- " << f << '\n';
    }
    return out.str();
}

std::string render_csv(const SummaryTable& t) {
    std::ostringstream out;
    const auto metrics = metric_columns(t);
    out << "method,cell,runs,failed";
    for (const auto& name : metrics)
        out << ',' << name;
    out << ",improvement_vs_base,gap_to_full\n";
    for (const auto& s : t.summaries) {
        out << s.key.method << ',' << s.key.cell << ',' << s.runs_ok << ',' << s.runs_failed;
        for (const auto& name : metrics) {
            out << ',';
            if (auto it = s.means.find(name); it != s.means.end())
                out << format_fixed(it->second);
        }
        out << ',';
        if (auto v = t.improvement(s.key.method, s.key.cell))
            out << format_fixed(*v);
        out << ',';
        if (auto v = t.gap(s.key.method, s.key.cell))
            out << format_fixed(*v);
        out << '\n';
    }
    return out.str();
}

} // namespace codbench::harness
