#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mscale/processes.hpp"

namespace mscale {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Single-column CSV of levels; a non-numeric first line is treated as a header.
PathSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::string_view header = "value");

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mscale
