#include "core/digest.hpp"

#include <openssl/sha.h>

namespace neurokey {

Sha256Digest sha256(std::span<const uint8_t> data) {
    Sha256Digest out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

}  // namespace neurokey
