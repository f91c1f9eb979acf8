#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace neurokey {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest sha256(std::span<const uint8_t> data);
std::string to_hex(std::span<const uint8_t> bytes);

}  // namespace neurokey
