#include "core/tpm.hpp"

#include <cstring>
#include <sstream>

namespace neurokey {

void TpmParams::validate() const {
    if (k < 1 || n < 1 || l < 1 || m < 1) {
        std::ostringstream os;
        os << "invalid TPM parameters (k=" << k << ", n=" << n << ", l=" << l << ", m=" << m
           << "): all of k, n, l, m must be >= 1";
        raise(ErrorCode::Validation, os.str());
    }
    // Canonical serialization and the wire format carry weights and input
    // values as signed bytes.
    if (l > 127 || m > 127) {
        raise(ErrorCode::Validation, "l and m must fit in a signed byte (<= 127)");
    }
}

std::vector<std::string> TpmParams::warnings() const {
    std::vector<std::string> out;
    if (m >= l) {
        std::ostringstream os;
        os << "security: m (" << m << ") >= l (" << l
           << "); an eavesdropper can reach full synchronization, keep m < l";
        out.push_back(os.str());
    }
    return out;
}

const char* to_string(Role role) {
    return role == Role::Sender ? "sender" : "recipient";
}

const char* to_string(LearningRule rule) {
    switch (rule) {
        case LearningRule::Hebbian: return "hebbian";
        case LearningRule::AntiHebbian: return "anti-hebbian";
        case LearningRule::RandomWalk: return "random-walk";
    }
    return "unknown";
}

LearningRule rule_from_string(const std::string& name) {
    if (name == "hebbian") return LearningRule::Hebbian;
    if (name == "anti-hebbian" || name == "antihebbian") return LearningRule::AntiHebbian;
    if (name == "random-walk" || name == "randomwalk") return LearningRule::RandomWalk;
    raise(ErrorCode::InvalidArgument, "unknown learning rule: " + name);
}

int64_t local_field(std::span<const int8_t> weights_row, std::span<const int8_t> input_row) {
    if (weights_row.size() != input_row.size()) {
        raise(ErrorCode::Dimension, "local_field: weight and input rows differ in length");
    }
    int64_t sum = 0;
    for (size_t i = 0; i < weights_row.size(); ++i) {
        sum += static_cast<int64_t>(weights_row[i]) * input_row[i];
    }
    return sum;
}

TreeParityMachine::TreeParityMachine(TpmParams params, Role role, WeightMatrix weights)
    : params_(params), role_(role), weights_(std::move(weights)) {
    params_.validate();
    if (weights_.rows() != params_.k || weights_.cols() != params_.n) {
        raise(ErrorCode::Dimension, "TreeParityMachine: weight matrix shape does not match params");
    }
    for (int8_t w : weights_.flat()) {
        if (w < -params_.l || w > params_.l) {
            raise(ErrorCode::Validation, "TreeParityMachine: weight outside [-l, l]");
        }
    }
}

TreeParityMachine TreeParityMachine::random(const TpmParams& params, Role role, RandomStream& rng) {
    return TreeParityMachine(params, role, random_weights(params, rng));
}

Evaluation TreeParityMachine::evaluate(const InputVector& input) const {
    if (input.rows() != params_.k || input.cols() != params_.n) {
        raise(ErrorCode::Dimension, "evaluate: input shape does not match params");
    }
    Evaluation eval;
    eval.neuron_outputs.resize(params_.k);
    int product = 1;
    for (int k = 0; k < params_.k; ++k) {
        const int y = sigma(local_field(weights_.row(k), input.row(k)), role_);
        eval.neuron_outputs[k] = static_cast<int8_t>(y);
        product *= y;
    }
    eval.output = static_cast<int8_t>(product);
    return eval;
}

void TreeParityMachine::learn(LearningRule rule, const InputVector& input, const Evaluation& eval) {
    if (input.rows() != params_.k || input.cols() != params_.n) {
        raise(ErrorCode::Dimension, "learn: input shape does not match params");
    }
    if (static_cast<int>(eval.neuron_outputs.size()) != params_.k) {
        raise(ErrorCode::Dimension, "learn: evaluation does not match params");
    }
    const int out = eval.output;
    for (int k = 0; k < params_.k; ++k) {
        if (eval.neuron_outputs[k] != out) continue;  // theta(y_k, O) == 0
        auto w = weights_.row(k);
        auto x = input.row(k);
        for (int n = 0; n < params_.n; ++n) {
            int delta;
            switch (rule) {
                case LearningRule::Hebbian: delta = out * x[n]; break;
                case LearningRule::AntiHebbian: delta = -out * x[n]; break;
                default: delta = x[n]; break;
            }
            int next = w[n] + delta;
            if (next > params_.l) next = params_.l;
            if (next < -params_.l) next = -params_.l;
            w[n] = static_cast<int8_t>(next);
        }
    }
}

WeightMatrix random_weights(const TpmParams& params, RandomStream& rng) {
    params.validate();
    WeightMatrix w(params.k, params.n);
    for (int8_t& v : w.flat()) {
        v = static_cast<int8_t>(rng.uniform_int(-params.l, params.l));
    }
    return w;
}

InputVector random_input_vector(const TpmParams& params, RandomStream& rng) {
    params.validate();
    InputVector x(params.k, params.n);
    for (int8_t& v : x.flat()) {
        // Uniform over the 2M values {-M..-1, 1..M}; zero is excluded.
        int64_t draw = rng.uniform_int(0, 2 * static_cast<int64_t>(params.m) - 1);
        v = static_cast<int8_t>(draw < params.m ? draw - params.m : draw - params.m + 1);
    }
    return x;
}

bool weights_equal(const WeightMatrix& a, const WeightMatrix& b) {
    if (!a.same_shape(b)) {
        raise(ErrorCode::Dimension, "weights_equal: shape mismatch");
    }
    return a == b;
}

std::vector<uint8_t> serialize_weights(const WeightMatrix& w) {
    std::vector<uint8_t> out(w.size());
    std::memcpy(out.data(), w.flat().data(), w.size());
    return out;
}

WeightMatrix deserialize_weights(std::span<const uint8_t> bytes, int rows, int cols) {
    if (rows < 1 || cols < 1 || bytes.size() != static_cast<size_t>(rows) * cols) {
        raise(ErrorCode::Dimension, "deserialize_weights: byte count does not match shape");
    }
    WeightMatrix w(rows, cols);
    std::memcpy(w.flat().data(), bytes.data(), bytes.size());
    return w;
}

}  // namespace neurokey
