#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace valor::util {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::uint8_t* data, std::size_t len);
std::string sha256_hex(const std::string& data);
std::string sha256_hex(const std::vector<std::uint8_t>& data);

}  // namespace valor::util
