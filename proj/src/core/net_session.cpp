#include "core/net_session.hpp"

#include <map>

namespace neurokey {

namespace {

template <typename T>
T expect_message(MessageChannel& channel, const char* what) {
    Message message = channel.recv();
    if (const T* m = std::get_if<T>(&message)) {
        return *m;
    }
    if (const AbortMsg* abort = std::get_if<AbortMsg>(&message)) {
        raise(ErrorCode::Protocol,
              std::string("peer aborted (reason ") + std::to_string(abort->reason) + ") while expecting " + what);
    }
    raise(ErrorCode::Protocol, std::string("unexpected ") + to_string(message_type(message)) +
                                   " while expecting " + what);
}

void send_abort(MessageChannel& channel, AbortReason reason) {
    try {
        channel.send(AbortMsg{static_cast<uint8_t>(reason)});
    } catch (const Error&) {
        // Peer already gone; the original failure is what matters.
    }
}

HelloMsg make_hello(const PeerConfig& config, bool initiator) {
    HelloMsg hello;
    hello.version = 1;
    hello.role = initiator ? Role::Sender : Role::Recipient;
    hello.k = static_cast<uint16_t>(config.params.k);
    hello.n = static_cast<uint16_t>(config.params.n);
    hello.l = static_cast<uint8_t>(config.params.l);
    hello.m = static_cast<uint8_t>(config.params.m);
    hello.rule = config.rule;
    hello.input_mode = config.input_mode;
    hello.input_seed = config.input_seed;
    return hello;
}

Sha256Digest weight_digest(const TreeParityMachine& tpm) {
    const std::vector<uint8_t> bytes = serialize_weights(tpm.weights());
    return sha256(bytes);
}

void check_input_values(const InputVectorMsg& msg, const TpmParams& params) {
    if (msg.values.size() != static_cast<size_t>(params.weight_count())) {
        raise(ErrorCode::Protocol, "INPUT_VECTOR size does not match negotiated K*N");
    }
    for (int8_t v : msg.values) {
        if (v == 0 || v < -params.m || v > params.m) {
            raise(ErrorCode::Protocol, "INPUT_VECTOR value outside the +-{1..M} alphabet");
        }
    }
}

}  // namespace

void PeerConfig::validate() const {
    params.validate();
    if (params.k > 0xffff || params.n > 0xffff) {
        raise(ErrorCode::Validation, "networked sessions require k and n to fit in 16 bits");
    }
    if (max_iterations < 1) {
        raise(ErrorCode::Validation, "max_iterations must be >= 1");
    }
    if (sync_probe_interval < 1) {
        raise(ErrorCode::Validation, "sync_probe_interval must be >= 1");
    }
}

HelloMsg negotiate(MessageChannel& channel, const PeerConfig& config, bool initiator) {
    config.validate();
    const HelloMsg mine = make_hello(config, initiator);
    channel.send(mine);
    const HelloMsg theirs = expect_message<HelloMsg>(channel, "HELLO");
    if (theirs.role == mine.role) {
        send_abort(channel, AbortReason::RoleCollision);
        raise(ErrorCode::Protocol, std::string("role collision: both peers are ") + to_string(mine.role));
    }
    const bool params_match = theirs.version == mine.version && theirs.k == mine.k && theirs.n == mine.n &&
                              theirs.l == mine.l && theirs.m == mine.m && theirs.rule == mine.rule &&
                              theirs.input_mode == mine.input_mode;
    if (!params_match) {
        send_abort(channel, AbortReason::ParamMismatch);
        raise(ErrorCode::Protocol, "parameter mismatch in HELLO exchange");
    }
    HelloMsg agreed = mine;
    agreed.input_seed = initiator ? mine.input_seed : theirs.input_seed;
    return agreed;
}

NetworkedSessionResult run_networked_session(MessageChannel& channel, const PeerConfig& config,
                                             bool initiator) {
    const HelloMsg agreed = negotiate(channel, config, initiator);

    RandomStream weight_rng(config.weight_seed);
    TreeParityMachine local =
        TreeParityMachine::random(config.params, initiator ? Role::Sender : Role::Recipient, weight_rng);
    RandomStream input_rng(agreed.input_seed);

    NetworkedSessionResult result;
    SessionTranscript& transcript = result.transcript;
    bool converged = false;

    // One probe/confirm round; `completed` is the number of finished
    // iterations and doubles as the probe sequence marker.
    auto probe_round = [&](uint32_t completed) -> bool {
        const Sha256Digest digest = weight_digest(local);
        if (initiator) {
            channel.send(SyncProbeMsg{completed, digest});
            const SyncConfirmMsg confirm = expect_message<SyncConfirmMsg>(channel, "SYNC_CONFIRM");
            if (confirm.iteration != completed) {
                raise(ErrorCode::Protocol, "SYNC_CONFIRM iteration mismatch");
            }
            return confirm.agree;
        }
        const SyncProbeMsg probe = expect_message<SyncProbeMsg>(channel, "SYNC_PROBE");
        if (probe.iteration != completed) {
            raise(ErrorCode::Protocol, "SYNC_PROBE iteration mismatch");
        }
        const bool agree = probe.digest == digest;
        channel.send(SyncConfirmMsg{completed, agree});
        return agree;
    };

    // Covers the (unlikely) case of equal initial weights.
    converged = probe_round(0);

    int64_t matched_count = 0;
    for (uint32_t iter = 0; !converged && iter < static_cast<uint32_t>(config.max_iterations); ++iter) {
        InputVector input;
        if (config.input_mode == InputMode::ExplicitVectors) {
            if (initiator) {
                input = random_input_vector(config.params, input_rng);
                InputVectorMsg msg;
                msg.iteration = iter;
                msg.values.assign(input.flat().begin(), input.flat().end());
                channel.send(msg);
            } else {
                const InputVectorMsg msg = expect_message<InputVectorMsg>(channel, "INPUT_VECTOR");
                if (msg.iteration != iter) {
                    raise(ErrorCode::Protocol, "INPUT_VECTOR iteration mismatch");
                }
                check_input_values(msg, config.params);
                input = InputVector(config.params.k, config.params.n);
                std::copy(msg.values.begin(), msg.values.end(), input.flat().begin());
            }
        } else {
            input = random_input_vector(config.params, input_rng);
        }

        const Evaluation eval = local.evaluate(input);
        channel.send(OutputMsg{iter, eval.output});
        const OutputMsg remote = expect_message<OutputMsg>(channel, "OUTPUT");
        if (remote.iteration != iter) {
            raise(ErrorCode::Protocol, "OUTPUT iteration mismatch");
        }

        IterationRecord record;
        record.index = iter;
        record.output_a = initiator ? eval.output : remote.output;
        record.output_b = initiator ? remote.output : eval.output;
        record.matched = eval.output == remote.output;
        transcript.records.push_back(record);

        if (record.matched) {
            local.learn(config.rule, input, eval);
            ++matched_count;
            if (matched_count % config.sync_probe_interval == 0) {
                converged = probe_round(iter + 1);
            }
        }
    }

    transcript.sync_time = static_cast<int64_t>(transcript.records.size());
    transcript.converged = converged;
    if (initiator) {
        transcript.final_weights_a = local.weights();
        if (converged) transcript.final_weights_b = local.weights();
    } else {
        transcript.final_weights_b = local.weights();
        if (converged) transcript.final_weights_a = local.weights();
    }
    if (converged) {
        result.key = distill_key(local.weights(), config.params.l);
        result.key_digest = key_digest_hex(result.key);
    }
    return result;
}

namespace {

NetworkedSessionResult run_with_optional_capture(std::shared_ptr<Channel> raw, const PeerConfig& config,
                                                 bool initiator, const std::string& capture_path,
                                                 int timeout_ms) {
    raw->set_recv_timeout_ms(timeout_ms);
    std::unique_ptr<CaptureWriter> capture;
    FrameTap tap;
    if (!capture_path.empty()) {
        capture = std::make_unique<CaptureWriter>(capture_path);
        tap = capture->tap();
    }
    MessageChannel channel(std::move(raw), std::move(tap));
    NetworkedSessionResult result = run_networked_session(channel, config, initiator);
    channel.close();
    return result;
}

}  // namespace

NetworkedSessionResult serve_session(TcpListener& listener, const PeerConfig& config,
                                     const std::string& capture_path, int timeout_ms) {
    return run_with_optional_capture(listener.accept(), config, false, capture_path, timeout_ms);
}

NetworkedSessionResult connect_session(const std::string& host, uint16_t port, const PeerConfig& config,
                                       const std::string& capture_path, int timeout_ms) {
    return run_with_optional_capture(connect_tcp(host, port, timeout_ms), config, true, capture_path,
                                     timeout_ms);
}

ReplayAttackResult replay_attack_from_capture(const std::string& capture_path, uint64_t attacker_seed,
                                              std::optional<LearningRule> attacker_rule, Role attacker_role) {
    const std::vector<CapturedMessage> messages = read_capture_file(capture_path);

    const HelloMsg* hello = nullptr;
    for (const CapturedMessage& captured : messages) {
        if (const HelloMsg* h = std::get_if<HelloMsg>(&captured.message)) {
            // The initiator's seed is authoritative in SeedDerived mode.
            if (hello == nullptr || h->role == Role::Sender) hello = h;
            if (h->role == Role::Sender) break;
        }
    }
    if (hello == nullptr) {
        raise(ErrorCode::Validation, "capture contains no HELLO message");
    }
    ReplayAttackResult result;
    result.params = TpmParams{hello->k, hello->n, hello->l, hello->m};
    result.params.validate();
    const LearningRule rule = attacker_rule.value_or(hello->rule);

    RandomStream weight_rng(attacker_seed);
    TreeParityMachine attacker = TreeParityMachine::random(result.params, attacker_role, weight_rng);
    RandomStream input_rng(hello->input_seed);

    // Per-iteration public data gathered from both directions.
    struct IterationData {
        std::optional<InputVector> input;
        std::vector<int8_t> outputs;
    };
    std::map<uint32_t, IterationData> iterations;
    Sha256Digest last_probe{};
    for (const CapturedMessage& captured : messages) {
        if (const InputVectorMsg* iv = std::get_if<InputVectorMsg>(&captured.message)) {
            check_input_values(*iv, result.params);
            InputVector input(result.params.k, result.params.n);
            std::copy(iv->values.begin(), iv->values.end(), input.flat().begin());
            iterations[iv->iteration].input = std::move(input);
        } else if (const OutputMsg* out = std::get_if<OutputMsg>(&captured.message)) {
            iterations[out->iteration].outputs.push_back(out->output);
        } else if (const SyncProbeMsg* probe = std::get_if<SyncProbeMsg>(&captured.message)) {
            last_probe = probe->digest;
            result.probe_seen = true;
        }
    }

    for (auto& [iter, data] : iterations) {
        InputVector input;
        if (data.input.has_value()) {
            input = std::move(*data.input);
        } else if (hello->input_mode == InputMode::SeedDerived) {
            input = random_input_vector(result.params, input_rng);
        } else {
            raise(ErrorCode::Validation,
                  "capture is missing the input vector for iteration " + std::to_string(iter));
        }
        if (data.outputs.size() != 2) {
            raise(ErrorCode::Validation,
                  "capture does not contain both outputs for iteration " + std::to_string(iter));
        }
        ++result.iterations_seen;
        if (data.outputs[0] != data.outputs[1]) continue;
        const Evaluation eval = attacker.evaluate(input);
        if (eval.output != data.outputs[0]) continue;
        attacker.learn(rule, input, eval);
        ++result.updates_applied;
    }

    result.attacker_weights = attacker.weights();
    result.attacker_key_digest = key_digest_hex(distill_key(result.attacker_weights, result.params.l));
    if (result.probe_seen) {
        result.probe_digest_match = sha256(serialize_weights(result.attacker_weights)) == last_probe;
    }
    return result;
}

}  // namespace neurokey
