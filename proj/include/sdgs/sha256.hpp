#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sdgs {

// Minimal SHA-256 (FIPS 180-4), used for telemetry reproducibility hashes and
// config fingerprints. Returns lowercase hex digest.
std::string sha256_hex(std::string_view data);

std::string sha256_file_hex(const std::string& path);

}  // namespace sdgs
