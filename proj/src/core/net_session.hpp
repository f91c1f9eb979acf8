#pragma once

#include <optional>
#include <string>

#include "core/analysis.hpp"
#include "core/channel.hpp"
#include "core/session.hpp"

namespace neurokey {

// What one peer knows before negotiation. The initiator always takes the
// Sender role, and its input_seed wins in SeedDerived mode.
struct PeerConfig {
    TpmParams params;
    LearningRule rule = LearningRule::Hebbian;
    InputMode input_mode = InputMode::ExplicitVectors;
    int max_iterations = 10000;
    int sync_probe_interval = 10;  // matched iterations between digest probes
    uint64_t weight_seed = 0;
    uint64_t input_seed = 0;

    void validate() const;
};

struct NetworkedSessionResult {
    SessionTranscript transcript;  // output_a = initiator/sender, output_b = responder/recipient
    KeyMaterial key;               // distilled locally; empty when not converged
    std::string key_digest;        // SHA-256 hex of the key; empty when not converged
};

// HELLO exchange: parameters must match exactly, roles must be opposite.
// A mismatch sends ABORT(1) and raises Protocol; a role collision sends
// ABORT(2). Returns the agreed HELLO view (the initiator's input_seed).
HelloMsg negotiate(MessageChannel& channel, const PeerConfig& config, bool initiator);

// Full networked key agreement over an established channel, including
// negotiation. Synchronization is detected through SHA-256 weight-digest
// probes (one before the loop, then one per sync_probe_interval matched
// iterations), so with sync_probe_interval = 1 the transcript matches the
// in-process simulator exactly. On convergence both final-weight slots of
// the transcript hold the local weights (the digest probe vouches for the
// peer). Any out-of-order message raises Protocol.
NetworkedSessionResult run_networked_session(MessageChannel& channel, const PeerConfig& config,
                                             bool initiator);

// Accepts a single connection and runs one session as responder.
NetworkedSessionResult serve_session(TcpListener& listener, const PeerConfig& config,
                                     const std::string& capture_path = "", int timeout_ms = 30000);

// Connects and runs one session as initiator.
NetworkedSessionResult connect_session(const std::string& host, uint16_t port, const PeerConfig& config,
                                       const std::string& capture_path = "", int timeout_ms = 30000);

struct ReplayAttackResult {
    TpmParams params;
    WeightMatrix attacker_weights;
    std::string attacker_key_digest;     // hex of the key distilled from attacker weights
    bool probe_digest_match = false;     // attacker weight digest equals the last observed probe
    bool probe_seen = false;
    int64_t iterations_seen = 0;
    int64_t updates_applied = 0;
};

// Offline eavesdropper: trains an attacker TPM on a captured transcript
// (public inputs and both outputs), using only on-the-wire data. In
// SeedDerived captures the inputs are re-derived from the public seed in
// the HELLO. Success is observable without the secret weights whenever
// the attacker's weight digest matches the final sync probe.
ReplayAttackResult replay_attack_from_capture(const std::string& capture_path, uint64_t attacker_seed,
                                              std::optional<LearningRule> attacker_rule = std::nullopt,
                                              Role attacker_role = Role::Recipient);

}  // namespace neurokey
