#pragma once

#include <filesystem>
#include <string>

namespace switchdiff {

/// Shortest round-trip decimal representation of a double, so emitted CSV
/// values compare exactly across runs.
std::string format_double(double v);

/// Writes content to path via a temp file in the same directory followed by
/// an atomic rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace switchdiff
