#pragma once

#include <cstdint>

#include "core/session.hpp"
#include "core/tpm.hpp"

namespace neurokey {

// Passive eavesdropper: a third TPM trained on the public transcript.
struct AttackSession {
    SessionConfig config;
    uint64_t attacker_weight_seed = 0;
    LearningRule attacker_rule = LearningRule::Hebbian;
    Role attacker_role = Role::Recipient;
};

struct AttackResult {
    SessionTranscript transcript;
    WeightMatrix attacker_final_weights;
    double score = 0.0;  // fraction of weights matching party A's
};

// Fraction of positions where the two matrices agree exactly.
double s_score(const WeightMatrix& w, const WeightMatrix& w_attacker);

// Runs the A-B key agreement with an eavesdropper C following the public
// inputs and outputs. C updates its weights only when all three outputs
// coincide; A and B update whenever their two outputs match, so the
// attack never perturbs the legitimate transcript. On an A-B timeout the
// result is flagged non-converged and the score is still computed
// against A's final weights.
AttackResult eavesdrop_session(const AttackSession& attack);

}  // namespace neurokey
