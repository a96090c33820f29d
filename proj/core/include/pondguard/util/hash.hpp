#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pondguard::util {

// 64-bit FNV-1a. Content hashes for rule sets and scenario configs.
std::uint64_t fnv1a64(std::string_view data);

// Lower-case 16-digit hex rendering of a 64-bit hash.
std::string hex_u64(std::uint64_t value);

// SHA-256 digests identify evidence artifacts in the safety case.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::filesystem::path& path);  // throws Error

}  // namespace pondguard::util
