#include "codbench/harness/registry.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>

namespace codbench::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

bool is_number(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int cell_rank(const std::string& c) {
    if (c == "base")
        return 0;
    if (is_number(c))
        return 1;
    if (c == "full")
        return 2;
    return 3;
}

} // namespace

bool cell_less(const std::string& a, const std::string& b) {
    const int ra = cell_rank(a);
    const int rb = cell_rank(b);
    if (ra != rb)
        return ra < rb;
    if (ra == 1) {
        if (a.size() != b.size())
            return a.size() < b.size();
    }
    return a < b;
}

ordered_json to_json(const RunRecord& r) {
    ordered_json j;
    j["method"] = r.method;
    if (is_number(r.cell))
        j["k"] = std::stoll(r.cell);
    else
        j["k"] = r.cell;
    j["run"] = r.run;
    ordered_json metrics = ordered_json::object();
    for (const auto& [name, value] : r.metrics)
        metrics[name] = round_to(value, 12);
    j["metrics"] = std::move(metrics);
    j["status"] = r.status == RunStatus::ok ? "ok" : "failed";
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

RunRecord run_record_from_json(const json& j) {
    try {
        RunRecord r;
        r.method = j.at("method").get<std::string>();
        const auto& k = j.at("k");
        if (k.is_number_integer())
            r.cell = std::to_string(k.get<long long>());
        else if (k.is_string())
            r.cell = k.get<std::string>();
        else
            throw SchemaError("registry: \"k\" must be an integer or a string");
        r.run = j.at("run").get<int>();
        for (const auto& [name, value] : j.at("metrics").items())
            r.metrics[name] = value.get<double>();
        const auto status = j.at("status").get<std::string>();
        if (status == "ok")
            r.status = RunStatus::ok;
        else if (status == "failed")
            r.status = RunStatus::failed;
        else
            throw SchemaError("registry: unknown status '" + status + "'");
        if (j.contains("error"))
            r.error = j.at("error").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("registry record: ") + e.what());
    }
}

std::vector<RunRecord> load_registry(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("registry not found: " + path.string());
    return Registry(path).records();
}

Registry::Registry(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in)
        return;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        RunRecord r = run_record_from_json(j);
        Key key{r.method, r.cell, r.run};
        records_[key] = std::move(r);
    }
}

bool Registry::contains(const std::string& method, const std::string& cell, int run) const {
    return find(method, cell, run) != nullptr;
}

const RunRecord* Registry::find(const std::string& method, const std::string& cell, int run) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(Key{method, cell, run});
    return it == records_.end() ? nullptr : &it->second;
}

void Registry::append(const RunRecord& record) {
    const std::string line = to_json(record).dump() + "\n";
    std::lock_guard lock(mutex_);
    if (path_.has_parent_path())
        std::filesystem::create_directories(path_.parent_path());
    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0)
        throw IoError("cannot open registry " + path_.string() + ": " + std::strerror(errno));
    const ssize_t written = ::write(fd, line.data(), line.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size()))
        throw IoError("short write to registry " + path_.string());
    records_[Key{record.method, record.cell, record.run}] = record;
}

std::vector<RunRecord> Registry::records() const {
    std::lock_guard lock(mutex_);
    std::vector<RunRecord> out;
    out.reserve(records_.size());
    for (const auto& [key, r] : records_)
        out.push_back(r);
    std::stable_sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.method != b.method)
            return a.method < b.method;
        if (a.cell != b.cell)
            return cell_less(a.cell, b.cell);
        return a.run < b.run;
    });
    return out;
}

} // namespace codbench::harness
