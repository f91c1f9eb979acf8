#include "core/frame.hpp"

#include <cstring>

namespace neurokey {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }
    std::span<const uint8_t> bytes(size_t count) {
        need(count);
        auto out = data_.subspan(pos_, count);
        pos_ += count;
        return out;
    }
    size_t remaining() const { return data_.size() - pos_; }

private:
    void need(size_t count) const {
        if (data_.size() - pos_ < count) {
            raise(ErrorCode::Framing, "frame payload truncated");
        }
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace

MsgType message_type(const Message& message) {
    return std::visit(
        [](const auto& m) -> MsgType {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HelloMsg>) return MsgType::Hello;
            else if constexpr (std::is_same_v<T, InputVectorMsg>) return MsgType::InputVector;
            else if constexpr (std::is_same_v<T, OutputMsg>) return MsgType::Output;
            else if constexpr (std::is_same_v<T, SyncProbeMsg>) return MsgType::SyncProbe;
            else if constexpr (std::is_same_v<T, SyncConfirmMsg>) return MsgType::SyncConfirm;
            else return MsgType::Abort;
        },
        message);
}

const char* to_string(MsgType type) {
    switch (type) {
        case MsgType::Hello: return "hello";
        case MsgType::InputVector: return "input_vector";
        case MsgType::Output: return "output";
        case MsgType::SyncProbe: return "sync_probe";
        case MsgType::SyncConfirm: return "sync_confirm";
        case MsgType::Abort: return "abort";
    }
    return "unknown";
}

std::vector<uint8_t> encode_frame(const Message& message) {
    std::vector<uint8_t> payload;
    std::visit(
        [&payload](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HelloMsg>) {
                payload.push_back(m.version);
                payload.push_back(static_cast<uint8_t>(m.role));
                put_u16(payload, m.k);
                put_u16(payload, m.n);
                payload.push_back(m.l);
                payload.push_back(m.m);
                payload.push_back(static_cast<uint8_t>(m.rule));
                payload.push_back(static_cast<uint8_t>(m.input_mode));
                put_u64(payload, m.input_seed);
            } else if constexpr (std::is_same_v<T, InputVectorMsg>) {
                put_u32(payload, m.iteration);
                payload.insert(payload.end(), m.values.begin(), m.values.end());
            } else if constexpr (std::is_same_v<T, OutputMsg>) {
                if (m.output != 1 && m.output != -1) {
                    raise(ErrorCode::Encoding, "OUTPUT payload must be +1 or -1");
                }
                put_u32(payload, m.iteration);
                payload.push_back(static_cast<uint8_t>(m.output));
            } else if constexpr (std::is_same_v<T, SyncProbeMsg>) {
                put_u32(payload, m.iteration);
                payload.insert(payload.end(), m.digest.begin(), m.digest.end());
            } else if constexpr (std::is_same_v<T, SyncConfirmMsg>) {
                put_u32(payload, m.iteration);
                payload.push_back(m.agree ? 1 : 0);
            } else {
                payload.push_back(m.reason);
            }
        },
        message);
    if (payload.size() > kMaxPayloadBytes) {
        raise(ErrorCode::Oversize, "frame payload exceeds 1 MiB");
    }
    std::vector<uint8_t> frame;
    frame.reserve(kFrameHeaderBytes + payload.size());
    put_u32(frame, static_cast<uint32_t>(payload.size()));
    frame.push_back(static_cast<uint8_t>(message_type(message)));
    frame.insert(frame.end(), payload.begin(), payload.end());
    return frame;
}

Message decode_frame(std::span<const uint8_t> frame) {
    if (frame.size() < kFrameHeaderBytes) {
        raise(ErrorCode::Framing, "frame shorter than header");
    }
    uint32_t length = 0;
    for (int i = 0; i < 4; ++i) length |= static_cast<uint32_t>(frame[i]) << (8 * i);
    if (length > kMaxPayloadBytes) {
        raise(ErrorCode::Oversize, "declared payload exceeds 1 MiB");
    }
    if (frame.size() != kFrameHeaderBytes + length) {
        raise(ErrorCode::Framing, "frame length does not match declared payload size");
    }
    const uint8_t type = frame[4];
    Reader r(frame.subspan(kFrameHeaderBytes));
    switch (type) {
        case static_cast<uint8_t>(MsgType::Hello): {
            HelloMsg m;
            m.version = r.u8();
            const uint8_t role = r.u8();
            if (role > 1) raise(ErrorCode::Protocol, "HELLO role must be 0 or 1");
            m.role = static_cast<Role>(role);
            m.k = r.u16();
            m.n = r.u16();
            m.l = r.u8();
            m.m = r.u8();
            const uint8_t rule = r.u8();
            if (rule > 2) raise(ErrorCode::Protocol, "HELLO rule must be 0, 1 or 2");
            m.rule = static_cast<LearningRule>(rule);
            const uint8_t mode = r.u8();
            if (mode > 1) raise(ErrorCode::Protocol, "HELLO input mode must be 0 or 1");
            m.input_mode = static_cast<InputMode>(mode);
            m.input_seed = r.u64();
            if (r.remaining() != 0) raise(ErrorCode::Framing, "HELLO payload has trailing bytes");
            return m;
        }
        case static_cast<uint8_t>(MsgType::InputVector): {
            InputVectorMsg m;
            m.iteration = r.u32();
            auto rest = r.bytes(r.remaining());
            m.values.resize(rest.size());
            std::memcpy(m.values.data(), rest.data(), rest.size());
            return m;
        }
        case static_cast<uint8_t>(MsgType::Output): {
            OutputMsg m;
            m.iteration = r.u32();
            m.output = static_cast<int8_t>(r.u8());
            if (r.remaining() != 0) raise(ErrorCode::Framing, "OUTPUT payload has trailing bytes");
            if (m.output != 1 && m.output != -1) {
                raise(ErrorCode::Protocol, "OUTPUT payload must be +1 or -1");
            }
            return m;
        }
        case static_cast<uint8_t>(MsgType::SyncProbe): {
            SyncProbeMsg m;
            m.iteration = r.u32();
            auto digest = r.bytes(m.digest.size());
            std::memcpy(m.digest.data(), digest.data(), m.digest.size());
            if (r.remaining() != 0) raise(ErrorCode::Framing, "SYNC_PROBE payload has trailing bytes");
            return m;
        }
        case static_cast<uint8_t>(MsgType::SyncConfirm): {
            SyncConfirmMsg m;
            m.iteration = r.u32();
            m.agree = r.u8() != 0;
            if (r.remaining() != 0) raise(ErrorCode::Framing, "SYNC_CONFIRM payload has trailing bytes");
            return m;
        }
        case static_cast<uint8_t>(MsgType::Abort): {
            AbortMsg m;
            m.reason = r.u8();
            if (r.remaining() != 0) raise(ErrorCode::Framing, "ABORT payload has trailing bytes");
            return m;
        }
        default:
            raise(ErrorCode::Protocol, "unknown message type");
    }
}

}  // namespace neurokey
