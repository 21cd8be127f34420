#pragma once

#include <string>

namespace valor::util {

// Write-temp-then-rename; the destination never holds a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace valor::util
