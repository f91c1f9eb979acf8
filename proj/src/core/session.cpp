#include "core/session.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "core/analysis.hpp"

namespace neurokey {

const char* to_string(InputMode mode) {
    return mode == InputMode::ExplicitVectors ? "explicit" : "seed-derived";
}

void SessionConfig::validate() const {
    params.validate();
    if (max_iterations < 1) {
        raise(ErrorCode::Validation, "max_iterations must be >= 1");
    }
    if (sync_probe_interval < 1) {
        raise(ErrorCode::Validation, "sync_probe_interval must be >= 1");
    }
}

IterationRecord step_pair(TreeParityMachine& a, TreeParityMachine& b, const InputVector& input,
                          LearningRule rule, int64_t index) {
    const Evaluation eval_a = a.evaluate(input);
    const Evaluation eval_b = b.evaluate(input);
    IterationRecord record;
    record.index = index;
    record.output_a = eval_a.output;
    record.output_b = eval_b.output;
    record.matched = eval_a.output == eval_b.output;
    if (record.matched) {
        a.learn(rule, input, eval_a);
        b.learn(rule, input, eval_b);
    }
    return record;
}

bool is_synchronized(const TreeParityMachine& a, const TreeParityMachine& b) {
    return weights_equal(a.weights(), b.weights());
}

SessionTranscript run_key_agreement(const SessionConfig& config) {
    config.validate();
    RandomStream input_rng(config.seeds.input_seed);
    RandomStream rng_a(config.seeds.weight_seed_a);
    RandomStream rng_b(config.seeds.weight_seed_b);
    TreeParityMachine a = TreeParityMachine::random(config.params, Role::Sender, rng_a);
    TreeParityMachine b = TreeParityMachine::random(config.params, Role::Recipient, rng_b);

    SessionTranscript transcript;
    if (is_synchronized(a, b)) {
        // Zero output bits were needed.
        transcript.converged = true;
        transcript.sync_time = 0;
        transcript.final_weights_a = a.weights();
        transcript.final_weights_b = b.weights();
        return transcript;
    }
    for (int64_t iter = 0; iter < config.max_iterations; ++iter) {
        const InputVector input = random_input_vector(config.params, input_rng);
        const IterationRecord record = step_pair(a, b, input, config.rule, iter);
        transcript.records.push_back(record);
        if (record.matched && is_synchronized(a, b)) {
            transcript.converged = true;
            break;
        }
    }
    transcript.sync_time = static_cast<int64_t>(transcript.records.size());
    transcript.final_weights_a = a.weights();
    transcript.final_weights_b = b.weights();
    return transcript;
}

void write_transcript_jsonl(const SessionTranscript& transcript, const SessionConfig& config,
                            std::ostream& out) {
    nlohmann::json header{
        {"type", "header"},
        {"k", config.params.k},
        {"n", config.params.n},
        {"l", config.params.l},
        {"m", config.params.m},
        {"rule", to_string(config.rule)},
        {"max_iterations", config.max_iterations},
        {"input_mode", to_string(config.input_mode)},
        {"input_seed", config.seeds.input_seed},
        {"weight_seed_a", config.seeds.weight_seed_a},
        {"weight_seed_b", config.seeds.weight_seed_b},
    };
    out << header.dump() << '\n';
    for (const IterationRecord& r : transcript.records) {
        nlohmann::json line{
            {"type", "iteration"},
            {"index", r.index},
            {"output_a", static_cast<int>(r.output_a)},
            {"output_b", static_cast<int>(r.output_b)},
            {"matched", r.matched},
        };
        out << line.dump() << '\n';
    }
    nlohmann::json summary{
        {"type", "summary"},
        {"sync_time", transcript.sync_time},
        {"converged", transcript.converged},
    };
    if (transcript.converged) {
        summary["key_digest"] = key_digest_hex(distill_key(transcript.final_weights_a, config.params.l));
    } else {
        summary["key_digest"] = nullptr;
    }
    out << summary.dump() << '\n';
}

}  // namespace neurokey
