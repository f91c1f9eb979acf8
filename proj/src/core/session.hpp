#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "core/tpm.hpp"

namespace neurokey {

enum class InputMode : uint8_t {
    ExplicitVectors = 0,
    SeedDerived     = 1,
};

const char* to_string(InputMode mode);

struct SessionSeeds {
    uint64_t input_seed = 0;     // shared public stream for input vectors
    uint64_t weight_seed_a = 0;  // party A private weight init
    uint64_t weight_seed_b = 0;  // party B private weight init
};

struct SessionConfig {
    TpmParams params;
    LearningRule rule = LearningRule::Hebbian;
    int max_iterations = 10000;
    InputMode input_mode = InputMode::ExplicitVectors;
    int sync_probe_interval = 10;  // networked mode only
    SessionSeeds seeds;

    void validate() const;
};

struct IterationRecord {
    int64_t index = 0;
    int8_t output_a = 0;
    int8_t output_b = 0;
    bool matched = false;
};

struct SessionTranscript {
    std::vector<IterationRecord> records;
    int64_t sync_time = 0;  // iterations (output exchanges) until full synchronization
    WeightMatrix final_weights_a;
    WeightMatrix final_weights_b;
    bool converged = false;
};

// One protocol round on an already-drawn public input: both evaluate,
// outputs are compared, and the learning rule is applied only on a match.
IterationRecord step_pair(TreeParityMachine& a, TreeParityMachine& b, const InputVector& input,
                          LearningRule rule, int64_t index);

bool is_synchronized(const TreeParityMachine& a, const TreeParityMachine& b);

// Runs the full mutual-learning loop until the weight matrices coincide
// or max_iterations is reached. A timeout is a reportable outcome
// (converged = false), not an error. Deterministic in the seeds; every
// iteration, matched or not, counts toward sync_time.
SessionTranscript run_key_agreement(const SessionConfig& config);

// JSON-lines transcript: header object, one line per iteration, summary
// object with sync_time, converged flag and the distilled key digest.
void write_transcript_jsonl(const SessionTranscript& transcript, const SessionConfig& config,
                            std::ostream& out);

}  // namespace neurokey
