#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ppfl {

using Digest32 = std::array<std::uint8_t, 32>;

Digest32 sha256(std::span<const std::uint8_t> data);
Digest32 sha256(const std::string& data);

// Keyed PRF: SHA-256 over key || message (fixed-width inputs; used for mask
// derivation where messages are short fixed-size labels).
Digest32 prf(const Digest32& key, std::span<const std::uint8_t> msg);
std::uint64_t prf_u64(const Digest32& key, std::span<const std::uint8_t> msg);

std::string hex(std::span<const std::uint8_t> data);

}  // namespace ppfl
