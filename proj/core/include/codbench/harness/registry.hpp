#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace codbench::harness {

/// Column of the k-shot table: "base" (zero-shot), a shot count such as "30",
/// or "full" (trained on the whole training split).
struct CellKey {
    std::string method;
    std::string cell;

    friend bool operator==(const CellKey&, const CellKey&) = default;
};

/// base < numeric k (ascending) < full < any other label (lexicographic).
bool cell_less(const std::string& a, const std::string& b);

struct CellKeyLess {
    bool operator()(const CellKey& a, const CellKey& b) const {
        if (a.method != b.method)
            return a.method < b.method;
        return cell_less(a.cell, b.cell);
    }
};

enum class RunStatus { ok, failed };

struct RunRecord {
    std::string method;
    std::string cell;
    int run = 0;
    std::map<std::string, double> metrics;
    RunStatus status = RunStatus::ok;
    std::string error;
};

nlohmann::ordered_json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

/// Parses a JSON-lines registry. When a (method, cell, run) appears more than
/// once the last line wins. Records come back sorted by (method, cell, run).
std::vector<RunRecord> load_registry(const std::filesystem::path& path);

/// Append-only run registry. Every record is written as one line with a single
/// O_APPEND write, so concurrent appends never interleave.
class Registry {
public:
    explicit Registry(std::filesystem::path path);

    bool contains(const std::string& method, const std::string& cell, int run) const;
    const RunRecord* find(const std::string& method, const std::string& cell, int run) const;
    void append(const RunRecord& record);
    std::vector<RunRecord> records() const;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    struct Key {
        std::string method;
        std::string cell;
        int run;
        auto operator<=>(const Key&) const = default;
    };

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::map<Key, RunRecord> records_;
};

} // namespace codbench::harness
