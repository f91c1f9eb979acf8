#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <future>
#include <thread>

#include "core/attack.hpp"
#include "core/net_session.hpp"

using namespace neurokey;

namespace {

PeerConfig peer_config(const TpmParams& params, uint64_t weight_seed, uint64_t input_seed,
                       InputMode mode = InputMode::ExplicitVectors, int probe_interval = 1) {
    PeerConfig config;
    config.params = params;
    config.rule = LearningRule::Hebbian;
    config.input_mode = mode;
    config.max_iterations = 10000;
    config.sync_probe_interval = probe_interval;
    config.weight_seed = weight_seed;
    config.input_seed = input_seed;
    return config;
}

struct PairResult {
    NetworkedSessionResult initiator;
    NetworkedSessionResult responder;
};

PairResult run_loopback_pair(const PeerConfig& initiator_config, const PeerConfig& responder_config,
                             FrameTap initiator_tap = nullptr) {
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel initiator_channel(a_end, std::move(initiator_tap));
    MessageChannel responder_channel(b_end);
    auto responder_future = std::async(std::launch::async, [&] {
        return run_networked_session(responder_channel, responder_config, false);
    });
    PairResult result;
    result.initiator = run_networked_session(initiator_channel, initiator_config, true);
    result.responder = responder_future.get();
    return result;
}

}  // namespace

TEST_CASE("negotiation agrees on matching parameters and opposite roles") {
    const TpmParams params{3, 8, 3, 2};
    const PairResult result =
        run_loopback_pair(peer_config(params, 1, 99), peer_config(params, 2, 77));
    CHECK(result.initiator.transcript.converged);
    CHECK(result.responder.transcript.converged);
    // The initiator's input seed wins; both sides counted the same rounds.
    CHECK(result.initiator.transcript.records.size() == result.responder.transcript.records.size());
}

TEST_CASE("parameter mismatch aborts the session") {
    const TpmParams params{3, 8, 3, 2};
    TpmParams other = params;
    other.l = 4;
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel initiator_channel(a_end);
    MessageChannel responder_channel(b_end);
    auto responder_future = std::async(std::launch::async, [&] {
        try {
            run_networked_session(responder_channel, peer_config(other, 2, 0), false);
            return false;
        } catch (const Error& e) {
            return e.code() == ErrorCode::Protocol;
        }
    });
    bool initiator_failed = false;
    try {
        run_networked_session(initiator_channel, peer_config(params, 1, 0), true);
    } catch (const Error& e) {
        initiator_failed = e.code() == ErrorCode::Protocol;
    }
    CHECK(initiator_failed);
    CHECK(responder_future.get());
}

TEST_CASE("role collision aborts with reason 2") {
    const TpmParams params{2, 4, 2, 1};
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel honest(a_end);
    MessageChannel rogue(b_end);
    // Rogue peer claims Sender as well.
    auto rogue_future = std::async(std::launch::async, [&] {
        HelloMsg hello;
        hello.role = Role::Sender;
        hello.k = 2;
        hello.n = 4;
        hello.l = 2;
        hello.m = 1;
        rogue.send(hello);
        const Message reply = rogue.recv();  // honest HELLO
        (void)reply;
        const Message abort = rogue.recv();
        return std::get<AbortMsg>(abort).reason;
    });
    bool saw_protocol_error = false;
    try {
        run_networked_session(honest, peer_config(params, 5, 6), true);
    } catch (const Error& e) {
        saw_protocol_error = e.code() == ErrorCode::Protocol;
    }
    CHECK(saw_protocol_error);
    CHECK(rogue_future.get() == static_cast<uint8_t>(AbortReason::RoleCollision));
}

TEST_CASE("loopback sessions reproduce simulator transcripts exactly") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const TpmParams params{3, 8, 3, 2};
        SessionConfig sim;
        sim.params = params;
        sim.rule = LearningRule::Hebbian;
        sim.max_iterations = 10000;
        sim.seeds = SessionSeeds{seed + 10, seed + 20, seed + 30};
        const SessionTranscript expected = run_key_agreement(sim);
        REQUIRE(expected.converged);

        const PairResult net = run_loopback_pair(peer_config(params, seed + 20, seed + 10),
                                                 peer_config(params, seed + 30, 0));
        REQUIRE(net.initiator.transcript.converged);
        REQUIRE(net.initiator.transcript.records.size() == expected.records.size());
        CHECK(net.initiator.transcript.sync_time == expected.sync_time);
        CHECK(net.responder.transcript.sync_time == expected.sync_time);
        for (size_t i = 0; i < expected.records.size(); ++i) {
            CHECK(net.initiator.transcript.records[i].output_a == expected.records[i].output_a);
            CHECK(net.initiator.transcript.records[i].output_b == expected.records[i].output_b);
            CHECK(net.responder.transcript.records[i].output_a == expected.records[i].output_a);
            CHECK(net.responder.transcript.records[i].output_b == expected.records[i].output_b);
        }
        CHECK(weights_equal(net.initiator.transcript.final_weights_a, expected.final_weights_a));
        CHECK(weights_equal(net.responder.transcript.final_weights_b, expected.final_weights_b));
        CHECK(net.initiator.key_digest == net.responder.key_digest);
        CHECK(net.initiator.key == net.responder.key);
    }
}

TEST_CASE("seed-derived mode reproduces the explicit-vector transcript") {
    const TpmParams params{3, 6, 3, 3};
    const PairResult explicit_mode = run_loopback_pair(peer_config(params, 100, 555),
                                                       peer_config(params, 200, 0));
    const PairResult seeded_mode =
        run_loopback_pair(peer_config(params, 100, 555, InputMode::SeedDerived),
                          peer_config(params, 200, 0, InputMode::SeedDerived));
    REQUIRE(explicit_mode.initiator.transcript.converged);
    REQUIRE(seeded_mode.initiator.transcript.converged);
    CHECK(explicit_mode.initiator.transcript.sync_time == seeded_mode.initiator.transcript.sync_time);
    CHECK(explicit_mode.initiator.key_digest == seeded_mode.initiator.key_digest);
    REQUIRE(explicit_mode.initiator.transcript.records.size() ==
            seeded_mode.initiator.transcript.records.size());
    for (size_t i = 0; i < explicit_mode.initiator.transcript.records.size(); ++i) {
        CHECK(explicit_mode.initiator.transcript.records[i].output_a ==
              seeded_mode.initiator.transcript.records[i].output_a);
        CHECK(explicit_mode.initiator.transcript.records[i].output_b ==
              seeded_mode.initiator.transcript.records[i].output_b);
    }
}

TEST_CASE("sync probes at a coarser interval still confirm the same key") {
    const TpmParams params{3, 8, 3, 2};
    const PairResult fine = run_loopback_pair(peer_config(params, 61, 62), peer_config(params, 63, 0));
    const PairResult coarse = run_loopback_pair(peer_config(params, 61, 62, InputMode::ExplicitVectors, 10),
                                                peer_config(params, 63, 0, InputMode::ExplicitVectors, 10));
    REQUIRE(fine.initiator.transcript.converged);
    REQUIRE(coarse.initiator.transcript.converged);
    CHECK(coarse.initiator.key_digest == fine.initiator.key_digest);
    // Detection may lag true weight equality, never precede it.
    CHECK(coarse.initiator.transcript.sync_time >= fine.initiator.transcript.sync_time);
}

TEST_CASE("tap sees both directions and never alters the transcript") {
    const TpmParams params{3, 8, 3, 2};
    const PairResult plain = run_loopback_pair(peer_config(params, 71, 72), peer_config(params, 73, 0));

    size_t sent_frames = 0, received_frames = 0;
    auto tap = [&](TapDirection direction, std::span<const uint8_t> frame) {
        CHECK(frame.size() >= kFrameHeaderBytes);
        if (direction == TapDirection::Sent) {
            ++sent_frames;
        } else {
            ++received_frames;
        }
    };
    const PairResult tapped =
        run_loopback_pair(peer_config(params, 71, 72), peer_config(params, 73, 0), tap);

    CHECK(sent_frames > 0);
    CHECK(received_frames > 0);
    REQUIRE(tapped.initiator.transcript.records.size() == plain.initiator.transcript.records.size());
    CHECK(tapped.initiator.transcript.sync_time == plain.initiator.transcript.sync_time);
    CHECK(tapped.initiator.key_digest == plain.initiator.key_digest);
    for (size_t i = 0; i < plain.initiator.transcript.records.size(); ++i) {
        CHECK(tapped.initiator.transcript.records[i].output_a ==
              plain.initiator.transcript.records[i].output_a);
        CHECK(tapped.initiator.transcript.records[i].output_b ==
              plain.initiator.transcript.records[i].output_b);
    }
}

TEST_CASE("captured sessions feed an offline attacker identical to the simulator attack") {
    const std::string capture_path =
        (std::filesystem::temp_directory_path() / "nk_test_capture.jsonl").string();
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const TpmParams params{3, 8, 3, 2};
        const uint64_t input_seed = seed + 501, seed_a = seed + 601, seed_b = seed + 701,
                       seed_c = seed + 801;

        CaptureWriter writer(capture_path);
        auto [a_end, b_end] = make_loopback_pair();
        MessageChannel initiator_channel(a_end, writer.tap());
        MessageChannel responder_channel(b_end);
        auto responder_future = std::async(std::launch::async, [&] {
            return run_networked_session(responder_channel, peer_config(params, seed_b, 0), false);
        });
        const NetworkedSessionResult net =
            run_networked_session(initiator_channel, peer_config(params, seed_a, input_seed), true);
        responder_future.get();
        REQUIRE(net.transcript.converged);

        const ReplayAttackResult replay = replay_attack_from_capture(capture_path, seed_c);
        CHECK(replay.iterations_seen == net.transcript.sync_time);

        AttackSession attack;
        attack.config.params = params;
        attack.config.rule = LearningRule::Hebbian;
        attack.config.max_iterations = 10000;
        attack.config.seeds = SessionSeeds{input_seed, seed_a, seed_b};
        attack.attacker_weight_seed = seed_c;
        attack.attacker_rule = LearningRule::Hebbian;
        const AttackResult direct = eavesdrop_session(attack);
        CHECK(weights_equal(replay.attacker_weights, direct.attacker_final_weights));
        CHECK(replay.probe_seen);
        CHECK(replay.probe_digest_match == (direct.score == 1.0));
    }
    std::filesystem::remove(capture_path);
}

TEST_CASE("captures in seed-derived mode reconstruct inputs from the public seed") {
    const std::string capture_path =
        (std::filesystem::temp_directory_path() / "nk_test_capture_seeded.jsonl").string();
    const TpmParams params{3, 6, 3, 2};
    CaptureWriter writer(capture_path);
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel initiator_channel(a_end, writer.tap());
    MessageChannel responder_channel(b_end);
    auto responder_future = std::async(std::launch::async, [&] {
        return run_networked_session(responder_channel,
                                     peer_config(params, 902, 0, InputMode::SeedDerived), false);
    });
    const NetworkedSessionResult net = run_networked_session(
        initiator_channel, peer_config(params, 901, 12345, InputMode::SeedDerived), true);
    responder_future.get();
    REQUIRE(net.transcript.converged);

    const ReplayAttackResult replay = replay_attack_from_capture(capture_path, 903);
    CHECK(replay.iterations_seen == net.transcript.sync_time);

    AttackSession attack;
    attack.config.params = params;
    attack.config.rule = LearningRule::Hebbian;
    attack.config.max_iterations = 10000;
    attack.config.seeds = SessionSeeds{12345, 901, 902};
    attack.attacker_weight_seed = 903;
    attack.attacker_rule = LearningRule::Hebbian;
    const AttackResult direct = eavesdrop_session(attack);
    CHECK(weights_equal(replay.attacker_weights, direct.attacker_final_weights));
    std::filesystem::remove(capture_path);
}

TEST_CASE("out-of-order messages raise protocol errors") {
    const TpmParams params{2, 4, 2, 1};
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel honest(a_end);
    MessageChannel rogue(b_end);
    auto rogue_future = std::async(std::launch::async, [&] {
        // Valid HELLO, then an OUTPUT where a SYNC_CONFIRM is expected.
        HelloMsg hello;
        hello.role = Role::Recipient;
        hello.k = 2;
        hello.n = 4;
        hello.l = 2;
        hello.m = 1;
        hello.rule = LearningRule::Hebbian;
        rogue.send(hello);
        (void)rogue.recv();  // honest HELLO
        (void)rogue.recv();  // pre-loop SYNC_PROBE
        rogue.send(OutputMsg{0, 1});
    });
    bool saw_protocol_error = false;
    try {
        run_networked_session(honest, peer_config(params, 11, 12), true);
    } catch (const Error& e) {
        saw_protocol_error = e.code() == ErrorCode::Protocol;
    }
    rogue_future.get();
    CHECK(saw_protocol_error);
}

TEST_CASE("garbage bytes raise typed errors, not crashes") {
    auto [a_end, b_end] = make_loopback_pair();
    MessageChannel honest(a_end);
    honest.set_recv_timeout_ms(2000);
    // An oversize header.
    const uint8_t oversize[5] = {0xff, 0xff, 0xff, 0x7f, 0x03};
    b_end->send_bytes(oversize);
    try {
        (void)honest.recv();
        FAIL("expected oversize error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Oversize);
    }
}

TEST_CASE("silent peer times out") {
    auto [a_end, b_end] = make_loopback_pair();
    (void)b_end;
    MessageChannel honest(a_end);
    honest.set_recv_timeout_ms(50);
    try {
        (void)honest.recv();
        FAIL("expected timeout");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Timeout);
    }
}

TEST_CASE("TCP loopback session matches the simulator") {
    const TpmParams params{3, 8, 3, 2};
    TcpListener listener(0, "127.0.0.1");
    const uint16_t port = listener.port();
    REQUIRE(port != 0);

    auto server_future = std::async(std::launch::async, [&] {
        return serve_session(listener, peer_config(params, 152, 0), "", 10000);
    });
    const NetworkedSessionResult client =
        connect_session("127.0.0.1", port, peer_config(params, 151, 153), "", 10000);
    const NetworkedSessionResult server = server_future.get();

    SessionConfig sim;
    sim.params = params;
    sim.rule = LearningRule::Hebbian;
    sim.max_iterations = 10000;
    sim.seeds = SessionSeeds{153, 151, 152};
    const SessionTranscript expected = run_key_agreement(sim);

    REQUIRE(client.transcript.converged);
    REQUIRE(server.transcript.converged);
    CHECK(client.transcript.sync_time == expected.sync_time);
    CHECK(server.transcript.sync_time == expected.sync_time);
    CHECK(client.key_digest == server.key_digest);
    CHECK(weights_equal(client.transcript.final_weights_a, expected.final_weights_a));
}
