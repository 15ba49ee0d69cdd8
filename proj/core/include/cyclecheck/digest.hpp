#pragma once

#include <string>
#include <string_view>

namespace cyclecheck {

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// Digest of a file's content. Throws OutputError if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace cyclecheck
