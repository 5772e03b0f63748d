#pragma once

#include <string>

namespace explore {

/* Reads a whole file; throws std::runtime_error when it cannot be opened. */
std::string read_file(const std::string& path);

/* Writes via a temporary file in the same directory and renames it over
 * the target, so readers never observe a half-written file. */
void atomic_write(const std::string& path, const std::string& content);

}  // namespace explore
