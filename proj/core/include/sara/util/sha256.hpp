#pragma once

#include <string>

namespace sara::util {

/// SHA-256 digest of the input, hex-encoded.
std::string sha256_hex(const std::string& data);

}  // namespace sara::util
