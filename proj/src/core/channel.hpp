#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "core/frame.hpp"

namespace neurokey {

// Duplex byte stream. recv_exact blocks until the requested bytes arrive,
// the peer closes (Network error) or the read timeout expires (Timeout).
class Channel {
public:
    virtual ~Channel() = default;
    virtual void send_bytes(std::span<const uint8_t> data) = 0;
    virtual void recv_exact(std::span<uint8_t> out) = 0;
    virtual void set_recv_timeout_ms(int timeout_ms) = 0;
    virtual void close() = 0;
};

// In-process channel pair with the same semantics as a socket.
std::pair<std::shared_ptr<Channel>, std::shared_ptr<Channel>> make_loopback_pair();

// TCP client connection.
std::shared_ptr<Channel> connect_tcp(const std::string& host, uint16_t port, int timeout_ms = 30000);

class TcpListener {
public:
    explicit TcpListener(uint16_t port, const std::string& bind_host = "0.0.0.0");
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    uint16_t port() const { return port_; }
    std::shared_ptr<Channel> accept();
    void close();

private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

enum class TapDirection : uint8_t {
    Sent     = 0,
    Received = 1,
};

// Read-only observer of raw frames at one endpoint; sees both directions.
// Must not block; a slow observer stalls the session, never corrupts it.
using FrameTap = std::function<void(TapDirection, std::span<const uint8_t> frame)>;

// Framing plus optional tap over a byte channel.
class MessageChannel {
public:
    explicit MessageChannel(std::shared_ptr<Channel> channel, FrameTap tap = nullptr)
        : channel_(std::move(channel)), tap_(std::move(tap)) {}

    void send(const Message& message);
    Message recv();
    void set_recv_timeout_ms(int timeout_ms) { channel_->set_recv_timeout_ms(timeout_ms); }
    void close() { channel_->close(); }

private:
    std::shared_ptr<Channel> channel_;
    FrameTap tap_;
};

// JSON-lines capture of decoded frames, one message per line, suitable
// for offline attacker replay.
class CaptureWriter {
public:
    explicit CaptureWriter(const std::string& path);
    ~CaptureWriter();

    FrameTap tap();

private:
    void write_frame(TapDirection direction, std::span<const uint8_t> frame);

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct CapturedMessage {
    TapDirection direction = TapDirection::Sent;
    Message message;
};

std::vector<CapturedMessage> read_capture_file(const std::string& path);
Message message_from_capture_json(const std::string& line, TapDirection* out_direction);
std::string message_to_capture_json(TapDirection direction, const Message& message);

}  // namespace neurokey
