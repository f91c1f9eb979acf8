#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "core/digest.hpp"
#include "core/session.hpp"
#include "core/tpm.hpp"

namespace neurokey {

// Wire frame: u32 little-endian payload length, u8 message type, payload.
// Payloads above 1 MiB are rejected before allocation.
constexpr size_t kMaxPayloadBytes = 1u << 20;
constexpr size_t kFrameHeaderBytes = 5;

enum class MsgType : uint8_t {
    Hello       = 0x01,
    InputVector = 0x02,
    Output      = 0x03,
    SyncProbe   = 0x04,
    SyncConfirm = 0x05,
    Abort       = 0x06,
};

enum class AbortReason : uint8_t {
    Generic       = 0,
    ParamMismatch = 1,
    RoleCollision = 2,
    Timeout       = 3,
};

struct HelloMsg {
    uint8_t version = 1;
    Role role = Role::Sender;
    uint16_t k = 0;
    uint16_t n = 0;
    uint8_t l = 0;
    uint8_t m = 0;
    LearningRule rule = LearningRule::Hebbian;
    InputMode input_mode = InputMode::ExplicitVectors;
    uint64_t input_seed = 0;

    bool operator==(const HelloMsg&) const = default;
};

struct InputVectorMsg {
    uint32_t iteration = 0;
    std::vector<int8_t> values;  // row-major K*N

    bool operator==(const InputVectorMsg&) const = default;
};

struct OutputMsg {
    uint32_t iteration = 0;
    int8_t output = 0;  // +1 or -1

    bool operator==(const OutputMsg&) const = default;
};

struct SyncProbeMsg {
    uint32_t iteration = 0;
    Sha256Digest digest{};  // SHA-256 of the canonical weight serialization

    bool operator==(const SyncProbeMsg&) const = default;
};

struct SyncConfirmMsg {
    uint32_t iteration = 0;
    bool agree = false;

    bool operator==(const SyncConfirmMsg&) const = default;
};

struct AbortMsg {
    uint8_t reason = 0;

    bool operator==(const AbortMsg&) const = default;
};

using Message = std::variant<HelloMsg, InputVectorMsg, OutputMsg, SyncProbeMsg, SyncConfirmMsg, AbortMsg>;

MsgType message_type(const Message& message);
const char* to_string(MsgType type);

// Deterministic encoding per the layout above. Field range violations
// raise Encoding errors.
std::vector<uint8_t> encode_frame(const Message& message);

// Inverse of encode_frame over a complete frame. Unknown type ->
// Protocol; truncated or trailing bytes -> Framing; payload above the
// cap -> Oversize; semantic violations (e.g. an OUTPUT that is not +-1)
// -> Protocol.
Message decode_frame(std::span<const uint8_t> frame);

}  // namespace neurokey
