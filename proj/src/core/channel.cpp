#include "core/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

namespace neurokey {

namespace {

// One direction of a loopback pair.
struct ByteQueue {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<uint8_t> data;
    bool closed = false;

    void push(std::span<const uint8_t> bytes) {
        {
            std::lock_guard lock(mutex);
            if (closed) {
                // Writing into a closed pipe.
                throw Error(ErrorCode::Network, "loopback channel closed");
            }
            data.insert(data.end(), bytes.begin(), bytes.end());
        }
        ready.notify_all();
    }

    void pop_exact(std::span<uint8_t> out, int timeout_ms) {
        std::unique_lock lock(mutex);
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (data.size() < out.size()) {
            if (closed) {
                throw Error(ErrorCode::Network, "loopback peer closed the channel");
            }
            if (ready.wait_until(lock, deadline) == std::cv_status::timeout) {
                throw Error(ErrorCode::Timeout, "loopback read timed out");
            }
        }
        for (size_t i = 0; i < out.size(); ++i) {
            out[i] = data.front();
            data.pop_front();
        }
    }

    void close() {
        {
            std::lock_guard lock(mutex);
            closed = true;
        }
        ready.notify_all();
    }
};

class LoopbackChannel : public Channel {
public:
    LoopbackChannel(std::shared_ptr<ByteQueue> out, std::shared_ptr<ByteQueue> in)
        : out_(std::move(out)), in_(std::move(in)) {}

    void send_bytes(std::span<const uint8_t> data) override { out_->push(data); }
    void recv_exact(std::span<uint8_t> out) override { in_->pop_exact(out, timeout_ms_); }
    void set_recv_timeout_ms(int timeout_ms) override { timeout_ms_ = timeout_ms; }
    void close() override {
        out_->close();
        in_->close();
    }

private:
    std::shared_ptr<ByteQueue> out_;
    std::shared_ptr<ByteQueue> in_;
    int timeout_ms_ = 30000;
};

class TcpChannel : public Channel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {}
    ~TcpChannel() override { close(); }

    void send_bytes(std::span<const uint8_t> data) override {
        size_t sent = 0;
        while (sent < data.size()) {
            const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n <= 0) {
                throw Error(ErrorCode::Network, std::string("send failed: ") + std::strerror(errno));
            }
            sent += static_cast<size_t>(n);
        }
    }

    void recv_exact(std::span<uint8_t> out) override {
        size_t got = 0;
        while (got < out.size()) {
            const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
            if (n == 0) {
                throw Error(ErrorCode::Network, "peer closed the connection");
            }
            if (n < 0) {
                if (errno == EAGAIN || errno == EWOULDBLOCK) {
                    throw Error(ErrorCode::Timeout, "socket read timed out");
                }
                throw Error(ErrorCode::Network, std::string("recv failed: ") + std::strerror(errno));
            }
            got += static_cast<size_t>(n);
        }
    }

    void set_recv_timeout_ms(int timeout_ms) override {
        timeval tv{};
        tv.tv_sec = timeout_ms / 1000;
        tv.tv_usec = (timeout_ms % 1000) * 1000;
        ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    }

    void close() override {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    int fd_;
};

int make_tcp_socket() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw Error(ErrorCode::Network, std::string("socket: ") + std::strerror(errno));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return fd;
}

}  // namespace

std::pair<std::shared_ptr<Channel>, std::shared_ptr<Channel>> make_loopback_pair() {
    auto a_to_b = std::make_shared<ByteQueue>();
    auto b_to_a = std::make_shared<ByteQueue>();
    return {std::make_shared<LoopbackChannel>(a_to_b, b_to_a),
            std::make_shared<LoopbackChannel>(b_to_a, a_to_b)};
}

std::shared_ptr<Channel> connect_tcp(const std::string& host, uint16_t port, int timeout_ms) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &result);
    if (rc != 0) {
        throw Error(ErrorCode::Network, std::string("resolve ") + host + ": " + gai_strerror(rc));
    }
    int fd = -1;
    std::string last_error = "no addresses";
    for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
        fd = make_tcp_socket();
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        last_error = std::strerror(errno);
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) {
        throw Error(ErrorCode::Network, "connect " + host + ":" + std::to_string(port) + ": " + last_error);
    }
    auto channel = std::make_shared<TcpChannel>(fd);
    channel->set_recv_timeout_ms(timeout_ms);
    return channel;
}

TcpListener::TcpListener(uint16_t port, const std::string& bind_host) {
    fd_ = make_tcp_socket();
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bind_host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::Network, "invalid bind address: " + bind_host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 16) != 0) {
        const std::string err = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::Network, "bind/listen on port " + std::to_string(port) + ": " + err);
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() { close(); }

std::shared_ptr<Channel> TcpListener::accept() {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) {
        throw Error(ErrorCode::Network, std::string("accept: ") + std::strerror(errno));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto channel = std::make_shared<TcpChannel>(fd);
    channel->set_recv_timeout_ms(30000);
    return channel;
}

void TcpListener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void MessageChannel::send(const Message& message) {
    const std::vector<uint8_t> frame = encode_frame(message);
    if (tap_) tap_(TapDirection::Sent, frame);
    channel_->send_bytes(frame);
}

Message MessageChannel::recv() {
    uint8_t header[kFrameHeaderBytes];
    channel_->recv_exact(header);
    uint32_t length = 0;
    for (int i = 0; i < 4; ++i) length |= static_cast<uint32_t>(header[i]) << (8 * i);
    if (length > kMaxPayloadBytes) {
        raise(ErrorCode::Oversize, "incoming frame exceeds 1 MiB");
    }
    std::vector<uint8_t> frame(header, header + kFrameHeaderBytes);
    frame.resize(kFrameHeaderBytes + length);
    channel_->recv_exact(std::span<uint8_t>(frame.data() + kFrameHeaderBytes, length));
    if (tap_) tap_(TapDirection::Received, frame);
    return decode_frame(frame);
}

std::string message_to_capture_json(TapDirection direction, const Message& message) {
    nlohmann::json j;
    j["dir"] = direction == TapDirection::Sent ? "sent" : "received";
    j["type"] = to_string(message_type(message));
    std::visit(
        [&j](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HelloMsg>) {
                j["version"] = m.version;
                j["role"] = to_string(m.role);
                j["k"] = m.k;
                j["n"] = m.n;
                j["l"] = m.l;
                j["m"] = m.m;
                j["rule"] = to_string(m.rule);
                j["input_mode"] = to_string(m.input_mode);
                j["input_seed"] = m.input_seed;
            } else if constexpr (std::is_same_v<T, InputVectorMsg>) {
                j["iteration"] = m.iteration;
                j["values"] = m.values;
            } else if constexpr (std::is_same_v<T, OutputMsg>) {
                j["iteration"] = m.iteration;
                j["output"] = static_cast<int>(m.output);
            } else if constexpr (std::is_same_v<T, SyncProbeMsg>) {
                j["iteration"] = m.iteration;
                j["digest"] = to_hex(m.digest);
            } else if constexpr (std::is_same_v<T, SyncConfirmMsg>) {
                j["iteration"] = m.iteration;
                j["agree"] = m.agree;
            } else {
                j["reason"] = m.reason;
            }
        },
        message);
    return j.dump();
}

namespace {

uint8_t hex_nibble(char c) {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    throw Error(ErrorCode::Validation, "invalid hex digit in capture digest");
}

}  // namespace

Message message_from_capture_json(const std::string& line, TapDirection* out_direction) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::Validation, std::string("capture line parse error: ") + e.what());
    }
    try {
        if (out_direction) {
            *out_direction =
                j.value("dir", "sent") == std::string("received") ? TapDirection::Received : TapDirection::Sent;
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "hello") {
            HelloMsg m;
            m.version = j.at("version").get<uint8_t>();
            m.role = j.at("role").get<std::string>() == "sender" ? Role::Sender : Role::Recipient;
            m.k = j.at("k").get<uint16_t>();
            m.n = j.at("n").get<uint16_t>();
            m.l = j.at("l").get<uint8_t>();
            m.m = j.at("m").get<uint8_t>();
            m.rule = rule_from_string(j.at("rule").get<std::string>());
            m.input_mode = j.at("input_mode").get<std::string>() == "seed-derived" ? InputMode::SeedDerived
                                                                                   : InputMode::ExplicitVectors;
            m.input_seed = j.at("input_seed").get<uint64_t>();
            return m;
        }
        if (type == "input_vector") {
            InputVectorMsg m;
            m.iteration = j.at("iteration").get<uint32_t>();
            m.values = j.at("values").get<std::vector<int8_t>>();
            return m;
        }
        if (type == "output") {
            OutputMsg m;
            m.iteration = j.at("iteration").get<uint32_t>();
            m.output = static_cast<int8_t>(j.at("output").get<int>());
            return m;
        }
        if (type == "sync_probe") {
            SyncProbeMsg m;
            m.iteration = j.at("iteration").get<uint32_t>();
            const std::string hex = j.at("digest").get<std::string>();
            if (hex.size() != m.digest.size() * 2) {
                raise(ErrorCode::Validation, "capture digest must be 64 hex chars");
            }
            for (size_t i = 0; i < m.digest.size(); ++i) {
                m.digest[i] = static_cast<uint8_t>((hex_nibble(hex[2 * i]) << 4) | hex_nibble(hex[2 * i + 1]));
            }
            return m;
        }
        if (type == "sync_confirm") {
            SyncConfirmMsg m;
            m.iteration = j.at("iteration").get<uint32_t>();
            m.agree = j.at("agree").get<bool>();
            return m;
        }
        if (type == "abort") {
            AbortMsg m;
            m.reason = j.at("reason").get<uint8_t>();
            return m;
        }
        raise(ErrorCode::Validation, "unknown capture message type: " + type);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::Validation, std::string("capture field error: ") + e.what());
    }
}

struct CaptureWriter::Impl {
    std::ofstream out;
    std::mutex mutex;
};

CaptureWriter::CaptureWriter(const std::string& path) : impl_(std::make_unique<Impl>()) {
    impl_->out.open(path, std::ios::trunc);
    if (!impl_->out) {
        raise(ErrorCode::Io, "cannot open capture file: " + path);
    }
}

CaptureWriter::~CaptureWriter() = default;

void CaptureWriter::write_frame(TapDirection direction, std::span<const uint8_t> frame) {
    const Message message = decode_frame(frame);
    std::lock_guard lock(impl_->mutex);
    impl_->out << message_to_capture_json(direction, message) << '\n';
    impl_->out.flush();
}

FrameTap CaptureWriter::tap() {
    return [this](TapDirection direction, std::span<const uint8_t> frame) { write_frame(direction, frame); };
}

std::vector<CapturedMessage> read_capture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::Io, "cannot open capture file: " + path);
    }
    std::vector<CapturedMessage> messages;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CapturedMessage captured;
        captured.message = message_from_capture_json(line, &captured.direction);
        messages.push_back(std::move(captured));
    }
    return messages;
}

}  // namespace neurokey
