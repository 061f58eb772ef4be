#pragma once

#include <string>
#include <string_view>

namespace factcheck {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Formats the first 16 bytes of a SHA-256 hex digest as a UUID-shaped id
/// (version nibble 5, RFC 4122 variant).
std::string uuid_from_digest(std::string_view hex_digest);

/// Random version-4 UUID.
std::string random_uuid();

}  // namespace factcheck
