#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace codbench {

// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Non-empty, whitespace-trimmed lines; lines starting with '#' are skipped.
std::vector<std::string> read_id_list(const std::filesystem::path& path);

// Fixed-point rendering with `digits` decimals ("%.6f" by default).
std::string format_fixed(double value, int digits = 6);

// Rounds to `digits` decimals so JSON output carries the same precision as CSV.
double round_to(double value, int digits = 6);

} // namespace codbench
