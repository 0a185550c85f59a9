#pragma once

#include "codbench/raster.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace codbench {

/// Reads an 8-bit PNG/JPEG (grayscale, or colour collapsed to luma) and maps
/// every byte b to b / 255. Other bit depths are rejected with an IoError that
/// names the file.
ProbabilityMap load_probability_map(const std::filesystem::path& path);

/// Loads a mask file and binarizes it at 0.5, so bytes >= 128 become
/// foreground. Anti-aliased ground truth is therefore hardened.
BinaryMask load_binary_mask(const std::filesystem::path& path);

/// Writes an 8-bit single-channel PNG with foreground 255 and background 0.
void save_mask(const std::filesystem::path& path, const BinaryMask& mask);

/// Writes an 8-bit single-channel PNG with bytes round(v * 255).
void save_map(const std::filesystem::path& path, const ProbabilityMap& map);

/// Image files (.png, .jpg, .jpeg, .bmp) directly inside `dir`, keyed by stem.
/// Throws IoError if the directory does not exist or two files share a stem.
std::map<std::string, std::filesystem::path> list_images_by_stem(const std::filesystem::path& dir);

} // namespace codbench
