#include "core/attack.hpp"

namespace neurokey {

double s_score(const WeightMatrix& w, const WeightMatrix& w_attacker) {
    if (!w.same_shape(w_attacker)) {
        raise(ErrorCode::Dimension, "s_score: shape mismatch");
    }
    auto a = w.flat();
    auto b = w_attacker.flat();
    size_t agree = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        agree += theta(a[i], b[i]);
    }
    return static_cast<double>(agree) / static_cast<double>(a.size());
}

AttackResult eavesdrop_session(const AttackSession& attack) {
    const SessionConfig& config = attack.config;
    config.validate();
    RandomStream input_rng(config.seeds.input_seed);
    RandomStream rng_a(config.seeds.weight_seed_a);
    RandomStream rng_b(config.seeds.weight_seed_b);
    RandomStream rng_c(attack.attacker_weight_seed);
    TreeParityMachine a = TreeParityMachine::random(config.params, Role::Sender, rng_a);
    TreeParityMachine b = TreeParityMachine::random(config.params, Role::Recipient, rng_b);
    TreeParityMachine c = TreeParityMachine::random(config.params, attack.attacker_role, rng_c);

    AttackResult result;
    if (is_synchronized(a, b)) {
        result.transcript.converged = true;
        result.transcript.sync_time = 0;
    } else {
        for (int64_t iter = 0; iter < config.max_iterations; ++iter) {
            const InputVector input = random_input_vector(config.params, input_rng);
            const Evaluation eval_c = c.evaluate(input);
            const IterationRecord record = step_pair(a, b, input, config.rule, iter);
            result.transcript.records.push_back(record);
            if (record.matched && eval_c.output == record.output_a) {
                c.learn(attack.attacker_rule, input, eval_c);
            }
            if (record.matched && is_synchronized(a, b)) {
                result.transcript.converged = true;
                break;
            }
        }
        result.transcript.sync_time = static_cast<int64_t>(result.transcript.records.size());
    }
    result.transcript.final_weights_a = a.weights();
    result.transcript.final_weights_b = b.weights();
    result.attacker_final_weights = c.weights();
    result.score = s_score(result.transcript.final_weights_a, result.attacker_final_weights);
    return result;
}

}  // namespace neurokey
