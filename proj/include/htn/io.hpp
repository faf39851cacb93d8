#pragma once

#include <string>

namespace htn {

// Formats a double with 17 significant digits: enough to round-trip exactly,
// so equal-seed runs serialize to identical bytes.
std::string fmt17(double v);

// Writes content to path atomically (temp file in the same directory, then
// rename). Creates parent directories as needed.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace htn
