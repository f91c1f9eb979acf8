#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace neurokey {

// Network shape: K neurons, N inputs per neuron, weights in [-L, L],
// input values in +-{1..M}.
struct TpmParams {
    int k = 1;
    int n = 1;
    int l = 1;
    int m = 1;

    // Throws Error(Validation) on out-of-range values.
    void validate() const;

    // Non-fatal configuration concerns, e.g. m >= l.
    std::vector<std::string> warnings() const;

    int weight_count() const { return k * n; }
    int weight_levels() const { return 2 * l + 1; }

    bool operator==(const TpmParams&) const = default;
};

enum class Role : uint8_t {
    Sender    = 0,
    Recipient = 1,
};

enum class LearningRule : uint8_t {
    Hebbian     = 0,
    AntiHebbian = 1,
    RandomWalk  = 2,
};

const char* to_string(Role role);
const char* to_string(LearningRule rule);
LearningRule rule_from_string(const std::string& name);

// K x N grid of signed 8-bit integers, row-major (row = neuron).
// Shared storage layout for weights and input vectors; the canonical
// byte serialization is exactly the row-major value array.
class Int8Grid {
public:
    Int8Grid() = default;
    Int8Grid(int rows, int cols) : rows_(rows), cols_(cols), values_(static_cast<size_t>(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return values_.size(); }

    int8_t at(int r, int c) const { return values_[static_cast<size_t>(r) * cols_ + c]; }
    int8_t& at(int r, int c) { return values_[static_cast<size_t>(r) * cols_ + c]; }

    // Spans borrow the grid's storage; rvalue access would dangle.
    std::span<const int8_t> row(int r) const& {
        return std::span<const int8_t>(values_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_));
    }
    std::span<int8_t> row(int r) & {
        return std::span<int8_t>(values_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_));
    }
    std::span<const int8_t> row(int) const&& = delete;

    std::span<const int8_t> flat() const& { return values_; }
    std::span<int8_t> flat() & { return values_; }
    std::span<const int8_t> flat() const&& = delete;

    bool same_shape(const Int8Grid& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
    bool operator==(const Int8Grid&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int8_t> values_;
};

using WeightMatrix = Int8Grid;
using InputVector  = Int8Grid;

// Per-evaluation result: hidden-neuron signs y_k and the network output O.
struct Evaluation {
    std::vector<int8_t> neuron_outputs;
    int8_t output = 0;
};

// Activation sign. Never returns zero: a zero local field maps to +1 for
// the recipient and -1 for the sender.
inline int sigma(int64_t local_field, Role role) {
    if (local_field > 0) return 1;
    if (local_field < 0) return -1;
    return role == Role::Recipient ? 1 : -1;
}

// 1 if a == b, else 0.
inline int theta(int64_t a, int64_t b) { return a == b ? 1 : 0; }

// Sum of x_kn * w_kn over one neuron's inputs.
int64_t local_field(std::span<const int8_t> weights_row, std::span<const int8_t> input_row);

class TreeParityMachine {
public:
    TreeParityMachine(TpmParams params, Role role, WeightMatrix weights);

    // Random uniform weights drawn from the given stream.
    static TreeParityMachine random(const TpmParams& params, Role role, RandomStream& rng);

    const TpmParams& params() const { return params_; }
    Role role() const { return role_; }
    const WeightMatrix& weights() const { return weights_; }

    Evaluation evaluate(const InputVector& input) const;

    // Applies the learning rule unconditionally; only neurons with
    // y_k == O move, and every weight saturates at +-L. The caller is
    // responsible for the outputs-match gate.
    void learn(LearningRule rule, const InputVector& input, const Evaluation& eval);

private:
    TpmParams params_;
    Role role_;
    WeightMatrix weights_;
};

WeightMatrix random_weights(const TpmParams& params, RandomStream& rng);
InputVector random_input_vector(const TpmParams& params, RandomStream& rng);

// True iff all entries match. Shape mismatch is an error, not `false`.
bool weights_equal(const WeightMatrix& a, const WeightMatrix& b);

// Canonical serialization: row-major K*N signed bytes.
std::vector<uint8_t> serialize_weights(const WeightMatrix& w);
WeightMatrix deserialize_weights(std::span<const uint8_t> bytes, int rows, int cols);

}  // namespace neurokey
