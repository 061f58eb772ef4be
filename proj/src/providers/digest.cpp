#include "factcheck/providers/digest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <random>
#include <stdexcept>

namespace factcheck {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0x0f];
  }
  return out;
}

namespace {

std::string format_uuid(const std::string& hex) {
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
         hex.substr(16, 4) + "-" + hex.substr(20, 12);
}

char variant_nibble(char c) {
  static constexpr char kHex[] = "0123456789abcdef";
  const int v = (c >= 'a') ? c - 'a' + 10 : c - '0';
  return kHex[8 | (v & 0x3)];
}

}  // namespace

std::string uuid_from_digest(std::string_view hex_digest) {
  if (hex_digest.size() < 32) throw std::invalid_argument("digest too short for a uuid");
  std::string hex(hex_digest.substr(0, 32));
  hex[12] = '5';
  hex[16] = variant_nibble(hex[16]);
  return format_uuid(hex);
}

std::string random_uuid() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex(32, '0');
  for (auto& c : hex) c = kHex[rng() & 0x0f];
  hex[12] = '4';
  hex[16] = variant_nibble(hex[16]);
  return format_uuid(hex);
}

}  // namespace factcheck
